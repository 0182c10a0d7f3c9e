#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "wick/errors.hpp"
#include "wick/symbols.hpp"

namespace wick {

enum class FieldKind { Psi, PsiBar, PhiPlus, PhiMinus };
enum class Statistics { Fermi, Bose };

constexpr Statistics statistics_of(FieldKind kind) {
  return (kind == FieldKind::Psi || kind == FieldKind::PsiBar)
             ? Statistics::Fermi
             : Statistics::Bose;
}

constexpr const char* kind_name(FieldKind kind) {
  switch (kind) {
    case FieldKind::Psi: return "psi";
    case FieldKind::PsiBar: return "psibar";
    case FieldKind::PhiPlus: return "phi_plus";
    case FieldKind::PhiMinus: return "phi_minus";
  }
  return "";
}

struct FieldOperator {
  FieldKind kind = FieldKind::Psi;
  PointLabel point;

  bool operator==(const FieldOperator&) const = default;
};

// A time-ordered product, written left to right exactly as it appears inside
// T[...]. The chronology itself is never resolved here; it lives in whatever
// values the contractions later take.
struct OperatorString {
  std::vector<FieldOperator> ops;
};

// The pair-form input of the evaluators: an ordered list of (ψ, ψ̄) or
// (φ⁺, φ⁻) point pairs of a single statistics.
struct PairProduct {
  Statistics statistics = Statistics::Fermi;
  std::vector<std::pair<PointLabel, PointLabel>> pairs;

  std::size_t size() const { return pairs.size(); }

  bool operator==(const PairProduct&) const = default;
};

struct PairForm {
  PairProduct fermi{Statistics::Fermi, {}};
  PairProduct bose{Statistics::Bose, {}};
  int sign = 1;  // fermionic reordering parity; bosons never contribute
};

// Sign of the permutation that moves each matched pair together, annihilator
// first, pairs ordered by annihilator position. Computed from the arc picture:
// a crossing is two arcs interleaving as a < c < b < d once each arc is
// oriented small-to-large, and every arc whose ψ̄ precedes its ψ adds one more
// flip (the pair itself must be turned around).
//
// psi_positions[a] / psibar_positions[b] are positions in the interleaved
// string; matching[a] = b pairs the a-th ψ with the b-th ψ̄.
inline int crossing_sign(const std::vector<std::size_t>& psi_positions,
                         const std::vector<std::size_t>& psibar_positions,
                         const std::vector<std::size_t>& matching) {
  const std::size_t n = psi_positions.size();
  if (psibar_positions.size() != n || matching.size() != n) {
    throw Error("crossing_sign: slot lists and matching must have equal size");
  }
  std::vector<bool> hit(n, false);
  for (std::size_t b : matching) {
    if (b >= n || hit[b]) {
      throw Error("crossing_sign: matching is not a bijection");
    }
    hit[b] = true;
  }

  std::size_t flips = 0;
  std::vector<std::pair<std::size_t, std::size_t>> arcs(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t lo = psi_positions[a];
    std::size_t hi = psibar_positions[matching[a]];
    if (hi < lo) {
      std::swap(lo, hi);
      ++flips;  // ψ̄ sits left of its ψ
    }
    arcs[a] = {lo, hi};
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& [a, b] = arcs[i];
      const auto& [c, d] = arcs[j];
      const bool crossing = (a < c && c < b && b < d) ||
                            (c < a && a < d && d < b);
      if (crossing) ++flips;
    }
  }
  return flips % 2 == 0 ? 1 : -1;
}

// Converts an arbitrary interleaving into pair form: the α-th ψ pairs with the
// α-th ψ̄ (appearance order), likewise for φ⁺/φ⁻. Fermi and Bose factors
// separate without a sign; only the fermionic reordering carries parity.
inline PairForm pair_form(const OperatorString& s) {
  PairForm out;
  std::vector<std::size_t> psi_pos, psibar_pos;
  std::vector<PointLabel> psi_pts, psibar_pts, phip_pts, phim_pts;
  std::size_t fermi_slot = 0;
  for (const auto& op : s.ops) {
    switch (op.kind) {
      case FieldKind::Psi:
        psi_pos.push_back(fermi_slot++);
        psi_pts.push_back(op.point);
        break;
      case FieldKind::PsiBar:
        psibar_pos.push_back(fermi_slot++);
        psibar_pts.push_back(op.point);
        break;
      case FieldKind::PhiPlus:
        phip_pts.push_back(op.point);
        break;
      case FieldKind::PhiMinus:
        phim_pts.push_back(op.point);
        break;
    }
  }
  auto check_balance = [](std::size_t lhs, std::size_t rhs,
                          const char* lhs_name, const char* rhs_name) {
    if (lhs == rhs) return;
    const char* deficient = lhs < rhs ? lhs_name : rhs_name;
    throw MalformedStringError(
        std::string("unbalanced operator string: ") + std::to_string(lhs) +
        " " + lhs_name + " vs " + std::to_string(rhs) + " " + rhs_name +
        " (" + deficient + " deficient)");
  };
  check_balance(psi_pts.size(), psibar_pts.size(), "psi", "psibar");
  check_balance(phip_pts.size(), phim_pts.size(), "phi_plus", "phi_minus");

  for (std::size_t a = 0; a < psi_pts.size(); ++a) {
    out.fermi.pairs.emplace_back(psi_pts[a], psibar_pts[a]);
  }
  for (std::size_t a = 0; a < phip_pts.size(); ++a) {
    out.bose.pairs.emplace_back(phip_pts[a], phim_pts[a]);
  }
  if (!psi_pos.empty()) {
    std::vector<std::size_t> identity(psi_pos.size());
    for (std::size_t a = 0; a < identity.size(); ++a) identity[a] = a;
    out.sign = crossing_sign(psi_pos, psibar_pos, identity);
  }
  return out;
}

}  // namespace wick
