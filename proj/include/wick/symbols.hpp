#pragma once

#include <compare>
#include <string>
#include <utility>

namespace wick {

// An opaque spacetime-spin point token. Position, imaginary time and spin
// projection are all folded into the token; the engine never looks inside.
struct PointLabel {
  std::string token;

  auto operator<=>(const PointLabel&) const = default;
};

// Flavors of the scalar symbols expressions are built from. Declaration order
// is the canonical sort rank: propagators come before vertex factors.
enum class SymbolFlavor {
  FermiContraction,  // Δ(a,b)  = time-ordered ψψ̄ average
  BoseContraction,   // Δ̄(a,b)  = time-ordered φ⁺φ⁻ average
  BarePropagator,    // G0(a,b) = -Δ(a,b)
  Potential,         // V(a-b), symmetric in its arguments
  DiracDelta,        // δ(a-b), symmetric in its arguments
};

inline bool symmetric_arguments(SymbolFlavor f) {
  return f == SymbolFlavor::Potential || f == SymbolFlavor::DiracDelta;
}

// A single scalar atom. Identified by (flavor, left, right); symmetric flavors
// keep their endpoints sorted so V(a-b) and V(b-a) are one symbol.
struct ContractionSymbol {
  SymbolFlavor flavor = SymbolFlavor::FermiContraction;
  PointLabel left;
  PointLabel right;

  auto operator<=>(const ContractionSymbol&) const = default;
};

inline ContractionSymbol make_symbol(SymbolFlavor flavor, PointLabel left,
                                     PointLabel right) {
  if (symmetric_arguments(flavor) && right < left) {
    std::swap(left, right);
  }
  return ContractionSymbol{flavor, std::move(left), std::move(right)};
}

inline ContractionSymbol fermi_contraction(PointLabel l, PointLabel r) {
  return make_symbol(SymbolFlavor::FermiContraction, std::move(l), std::move(r));
}

inline ContractionSymbol bose_contraction(PointLabel l, PointLabel r) {
  return make_symbol(SymbolFlavor::BoseContraction, std::move(l), std::move(r));
}

inline ContractionSymbol bare_propagator(PointLabel l, PointLabel r) {
  return make_symbol(SymbolFlavor::BarePropagator, std::move(l), std::move(r));
}

inline ContractionSymbol potential(PointLabel a, PointLabel b) {
  return make_symbol(SymbolFlavor::Potential, std::move(a), std::move(b));
}

inline ContractionSymbol dirac_delta(PointLabel a, PointLabel b) {
  return make_symbol(SymbolFlavor::DiracDelta, std::move(a), std::move(b));
}

// Display rendering: Δ(x1,x2), Δ̄(a,b), G0(x1,x2), V(z1-z2), δ(z1-z2).
inline std::string render(const ContractionSymbol& s) {
  switch (s.flavor) {
    case SymbolFlavor::FermiContraction:
      return "Δ(" + s.left.token + "," + s.right.token + ")";
    case SymbolFlavor::BoseContraction:
      return "Δ̄(" + s.left.token + "," + s.right.token + ")";
    case SymbolFlavor::BarePropagator:
      return "G0(" + s.left.token + "," + s.right.token + ")";
    case SymbolFlavor::Potential:
      return "V(" + s.left.token + "-" + s.right.token + ")";
    case SymbolFlavor::DiracDelta:
      return "δ(" + s.left.token + "-" + s.right.token + ")";
  }
  return {};
}

}  // namespace wick
