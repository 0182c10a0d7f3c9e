#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wick/contraction_matrix.hpp"
#include "wick/errors.hpp"
#include "wick/evaluators.hpp"
#include "wick/operator_string.hpp"
#include "wick/propagator.hpp"
#include "wick/rational.hpp"
#include "wick/symbolic_sum.hpp"
#include "wick/symbols.hpp"

namespace wick {

// The two-body interaction vertex. At first order it contributes the factor
// prefactor·V(z1−z2) and one (ψ(z) ψ̄(z)) pair per vertex point.
struct InteractionSpec {
  ExactScalar prefactor = make_rational(1, 2);
  std::vector<PointLabel> vertex_points = {PointLabel{"z1"}, PointLabel{"z2"}};

  static InteractionSpec first_order(PointLabel z1 = PointLabel{"z1"},
                                     PointLabel z2 = PointLabel{"z2"}) {
    InteractionSpec spec;
    spec.vertex_points = {std::move(z1), std::move(z2)};
    return spec;
  }

  std::vector<std::pair<PointLabel, PointLabel>> pair_insertions() const {
    std::vector<std::pair<PointLabel, PointLabel>> out;
    out.reserve(vertex_points.size());
    for (const auto& z : vertex_points) out.emplace_back(z, z);
    return out;
  }
};

enum class Particles { One = 1, Two = 2 };

struct GreensRequest {
  Particles particles = Particles::One;
  int order = 0;
  std::vector<PointLabel> external_points;
};

// Final propagator-language result: G0/V/δ factors only, plus the bookkeeping
// of which labels are integrated over.
struct GreensResult {
  SymbolicSum expression;
  std::vector<PointLabel> integration_vars;
  std::vector<PointLabel> external_points;
};

// Deletes every monomial carrying a contraction (Δ, Δ̄ or G0) whose both
// endpoints are external: the expansion-level form of the linked-cluster rule.
inline SymbolicSum linked_cluster_reduce(const SymbolicSum& sum,
                                         const std::set<PointLabel>& externals) {
  std::vector<Monomial> kept;
  for (const auto& term : sum.terms()) {
    const bool disconnected =
        std::any_of(term.factors.begin(), term.factors.end(),
                    [&](const ContractionSymbol& s) {
                      return !symmetric_arguments(s.flavor) &&
                             externals.contains(s.left) &&
                             externals.contains(s.right);
                    });
    if (!disconnected) kept.push_back(term);
  }
  return SymbolicSum::from_terms(std::move(kept));
}

namespace detail {

inline ContractionSymbol relabel_symbol(
    const ContractionSymbol& s, const std::map<PointLabel, PointLabel>& map) {
  auto rename = [&](const PointLabel& p) {
    const auto it = map.find(p);
    return it == map.end() ? p : it->second;
  };
  return make_symbol(s.flavor, rename(s.left), rename(s.right));
}

inline std::vector<ContractionSymbol> relabel_factors(
    const std::vector<ContractionSymbol>& factors,
    const std::map<PointLabel, PointLabel>& map) {
  std::vector<ContractionSymbol> out;
  out.reserve(factors.size());
  for (const auto& f : factors) out.push_back(relabel_symbol(f, map));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Canonicalizes each monomial over permutations of the dummy labels: the
// lexicographically least relabeling wins and coinciding orbits merge. Under
// an integration symmetric in the dummies the value is unchanged; this is what
// cancels the vertex symmetry factor 1/2.
inline SymbolicSum relabel_dummies(const SymbolicSum& sum,
                                   const std::vector<PointLabel>& dummies) {
  std::vector<PointLabel> sorted = dummies;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error("relabel_dummies: dummy labels must be distinct");
  }
  std::vector<Monomial> out;
  for (const auto& term : sum.terms()) {
    std::vector<PointLabel> image = sorted;
    std::vector<ContractionSymbol> best = term.factors;
    do {
      std::map<PointLabel, PointLabel> map;
      for (std::size_t i = 0; i < sorted.size(); ++i) map[sorted[i]] = image[i];
      auto candidate = detail::relabel_factors(term.factors, map);
      if (candidate < best) best = std::move(candidate);
    } while (std::next_permutation(image.begin(), image.end()));
    out.push_back(Monomial{term.coeff, std::move(best)});
  }
  return SymbolicSum::from_terms(std::move(out));
}

// Rewrites every fermionic contraction through G0 = −Δ.
inline SymbolicSum to_bare_propagators(const SymbolicSum& sum) {
  std::vector<Monomial> out;
  for (const auto& term : sum.terms()) {
    Monomial m;
    m.coeff = term.coeff;
    m.factors.reserve(term.factors.size());
    for (const auto& f : term.factors) {
      if (f.flavor == SymbolFlavor::FermiContraction) {
        m.coeff = -m.coeff;
        m.factors.push_back(make_symbol(SymbolFlavor::BarePropagator, f.left,
                                        f.right));
      } else {
        m.factors.push_back(f);
      }
    }
    out.push_back(std::move(m));
  }
  return SymbolicSum::from_terms(std::move(out));
}

namespace detail {

inline void require_order(int order) {
  if (order < 0 || order > 1) {
    throw UnsupportedOrderError("perturbation order " + std::to_string(order) +
                                " not supported (only 0 and 1)");
  }
}

inline void require_distinct(const std::vector<PointLabel>& labels) {
  std::vector<PointLabel> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error("external and vertex labels must be pairwise distinct");
  }
}

}  // namespace detail

// One-particle thermal Green's function through first order:
//   G(x1,x2) = G0(x1,x2)
//            + ∫dz1 dz2 [ -V(z1-z2)·G0(x1,z1)·G0(z1,z2)·G0(z2,x2)
//                         +V(z1-z2)·G0(x1,z1)·G0(z1,x2)·G0(z2,z2) ].
// Pipeline: the 3-pair product ((x1,x2),(z1,z1),(z2,z2)), its contraction
// matrix with the external entry zeroed and ⟨S⟩₀ set to 1 (linked-cluster
// rule), the vertex factor prefactor·V(z1−z2), a dummy relabeling that
// cancels the 1/2, and the rewrite Δ → −G0.
inline GreensResult one_particle_greens(
    const PointLabel& x1, const PointLabel& x2, int order,
    const InteractionSpec& spec = InteractionSpec::first_order()) {
  detail::require_order(order);
  detail::require_distinct({x1, x2});
  GreensResult result;
  result.external_points = {x1, x2};

  SymbolicSum expression = -SymbolicSum::symbol(fermi_contraction(x1, x2));
  if (order >= 1) {
    detail::require_distinct({x1, x2, spec.vertex_points[0],
                              spec.vertex_points[1]});
    PairProduct p{Statistics::Fermi, {{x1, x2}}};
    for (const auto& insertion : spec.pair_insertions()) {
      p.pairs.push_back(insertion);
    }
    auto matrix = build_symbolic_matrix(p, PropagatorProvider::symbolic());
    matrix = zero_external_block(matrix, {x1, x2});
    SymbolicSum correction = det_minors(matrix);
    correction *= SymbolicSum::symbol(
        potential(spec.vertex_points[0], spec.vertex_points[1]));
    correction *= spec.prefactor;
    correction = relabel_dummies(correction, spec.vertex_points);
    expression += correction;
    result.integration_vars = spec.vertex_points;
  }
  result.expression = to_bare_propagators(expression);
  return result;
}

// Two-particle function through first order. The correction keeps both dummy
// orientations of each exchange term (coefficients ±1/2), so the sum carries
// 2 zeroth-order and 4 first-order monomials; relabel_dummies folds it onto
// the two-term bracket form when desired.
inline GreensResult two_particle_greens(
    const PointLabel& x1, const PointLabel& x2, const PointLabel& x3,
    const PointLabel& x4, int order,
    const InteractionSpec& spec = InteractionSpec::first_order()) {
  detail::require_order(order);
  detail::require_distinct({x1, x2, x3, x4});
  GreensResult result;
  result.external_points = {x1, x2, x3, x4};

  PairProduct zeroth{Statistics::Fermi, {{x1, x3}, {x2, x4}}};
  SymbolicSum expression = det_minors(
      build_symbolic_matrix(zeroth, PropagatorProvider::symbolic()));
  if (order >= 1) {
    detail::require_distinct({x1, x2, x3, x4, spec.vertex_points[0],
                              spec.vertex_points[1]});
    PairProduct p = zeroth;
    for (const auto& insertion : spec.pair_insertions()) {
      p.pairs.push_back(insertion);
    }
    auto matrix = build_symbolic_matrix(p, PropagatorProvider::symbolic());
    matrix = zero_external_block(matrix, {x1, x2, x3, x4});
    SymbolicSum correction = det_minors(matrix);
    correction *= SymbolicSum::symbol(
        potential(spec.vertex_points[0], spec.vertex_points[1]));
    correction *= -spec.prefactor;
    expression += correction;
    result.integration_vars = spec.vertex_points;
  }
  result.expression = to_bare_propagators(expression);
  return result;
}

inline GreensResult greens_function(
    const GreensRequest& request,
    const InteractionSpec& spec = InteractionSpec::first_order()) {
  if (request.particles == Particles::One) {
    if (request.external_points.size() != 2) {
      throw StructureError("one-particle request needs 2 external points");
    }
    return one_particle_greens(request.external_points[0],
                               request.external_points[1], request.order, spec);
  }
  if (request.external_points.size() != 4) {
    throw StructureError("two-particle request needs 4 external points");
  }
  return two_particle_greens(request.external_points[0],
                             request.external_points[1],
                             request.external_points[2],
                             request.external_points[3], request.order, spec);
}

// Strips the external legs G0(x1,·)···G0(·,x2) off a first-order one-particle
// result and returns the kernel between them:
//   Σ(z1,z2) = -V(z1-z2)·G0(z1,z2) + δ(z1-z2)·∫dz V(z1-z)·G0(z,z).
// Kernels whose legs attach to one vertex become δ terms; any remaining
// internal dummy is renamed to the fresh integration label "z".
inline SymbolicSum extract_self_energy(const GreensResult& result) {
  if (result.external_points.size() != 2) {
    throw StructureError("self-energy extraction needs a one-particle result");
  }
  if (result.integration_vars.size() != 2) {
    throw StructureError(
        "self-energy extraction needs a first-order result with two "
        "integration variables");
  }
  const PointLabel& x1 = result.external_points[0];
  const PointLabel& x2 = result.external_points[1];
  const PointLabel in_var = result.integration_vars[0];
  const PointLabel out_var = result.integration_vars[1];
  const std::set<PointLabel> dummies(result.integration_vars.begin(),
                                     result.integration_vars.end());
  PointLabel fresh{"z"};
  while (fresh == x1 || fresh == x2 || dummies.contains(fresh)) {
    fresh.token += "z";
  }

  std::vector<Monomial> sigma_terms;
  for (const auto& term : result.expression.terms()) {
    const bool correction =
        std::any_of(term.factors.begin(), term.factors.end(),
                    [&](const ContractionSymbol& s) {
                      return dummies.contains(s.left) ||
                             dummies.contains(s.right);
                    });
    if (!correction) continue;

    std::vector<ContractionSymbol> rest;
    const ContractionSymbol* in_leg = nullptr;
    const ContractionSymbol* out_leg = nullptr;
    for (const auto& f : term.factors) {
      const bool is_g0 = f.flavor == SymbolFlavor::BarePropagator;
      if (is_g0 && f.left == x1 && !in_leg) {
        in_leg = &f;
      } else if (is_g0 && f.right == x2 && !out_leg) {
        out_leg = &f;
      } else {
        rest.push_back(f);
      }
    }
    if (!in_leg || !out_leg || dummies.contains(in_leg->right) == false ||
        dummies.contains(out_leg->left) == false) {
      throw StructureError("term is not leg-dressed: " +
                           render(SymbolicSum::from_terms({term})));
    }
    const PointLabel entry_point = in_leg->right;
    const PointLabel exit_point = out_leg->left;

    Monomial kernel;
    kernel.coeff = term.coeff;
    std::map<PointLabel, PointLabel> rename;
    if (entry_point == exit_point) {
      // Both legs on one vertex: a δ(z1-z2) kernel with the leftover vertex
      // integrated under a fresh label.
      rename[entry_point] = in_var;
      for (const auto& d : dummies) {
        if (d != entry_point) rename[d] = fresh;
      }
      kernel.factors.push_back(dirac_delta(in_var, out_var));
    } else {
      rename[entry_point] = in_var;
      rename[exit_point] = out_var;
    }
    for (const auto& f : rest) {
      kernel.factors.push_back(detail::relabel_symbol(f, rename));
    }
    sigma_terms.push_back(std::move(kernel));
  }
  if (sigma_terms.empty()) {
    throw StructureError(
        "no leg-dressed correction terms: input looks like a zeroth-order "
        "result");
  }
  return SymbolicSum::from_terms(std::move(sigma_terms));
}

}  // namespace wick
