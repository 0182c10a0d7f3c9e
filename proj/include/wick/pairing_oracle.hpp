#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "wick/errors.hpp"
#include "wick/operator_string.hpp"
#include "wick/propagator.hpp"
#include "wick/rational.hpp"
#include "wick/symbolic_sum.hpp"

namespace wick {

inline constexpr std::size_t kDefaultOracleLimit = 8;

// One complete contraction pattern over the interleaved positional form of a
// pair product (ψ_α at position 2α, ψ̄_α at 2α+1). arcs[α] = (ψ position,
// matched ψ̄ position); the sign is the fermionic crossing parity, +1 for Bose.
struct Pairing {
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  int sign = 1;
};

// All n! perfect matchings in lexicographic order of the matched ψ̄ indices.
// Deliberately shares no sign logic with the determinant evaluators: parity
// comes from arc crossings on the interleaved string, not from cofactors.
inline std::vector<Pairing> enumerate_pairings(
    const PairProduct& p, std::size_t limit = kDefaultOracleLimit) {
  const std::size_t n = p.size();
  if (n > limit) {
    throw OracleLimitError(
        "pairing enumeration over " + std::to_string(n) +
        " pairs exceeds the configured limit of " + std::to_string(limit) +
        "; use the determinant/permanent path instead");
  }
  std::vector<std::size_t> psi_positions(n), psibar_positions(n);
  for (std::size_t a = 0; a < n; ++a) {
    psi_positions[a] = 2 * a;
    psibar_positions[a] = 2 * a + 1;
  }
  std::vector<std::size_t> matching(n);
  std::iota(matching.begin(), matching.end(), 0);
  std::vector<Pairing> out;
  do {
    Pairing pairing;
    pairing.arcs.reserve(n);
    for (std::size_t a = 0; a < n; ++a) {
      pairing.arcs.emplace_back(psi_positions[a],
                                psibar_positions[matching[a]]);
    }
    pairing.sign = p.statistics == Statistics::Fermi
                       ? crossing_sign(psi_positions, psibar_positions, matching)
                       : 1;
    out.push_back(std::move(pairing));
  } while (std::next_permutation(matching.begin(), matching.end()));
  return out;
}

namespace detail {

template <typename T, typename EntryFn>
T oracle_sum(const PairProduct& p, std::size_t limit, EntryFn&& entry) {
  T total(0);
  for (const auto& pairing : enumerate_pairings(p, limit)) {
    T product(1);
    for (const auto& [psi_pos, psibar_pos] : pairing.arcs) {
      product *= entry(p.pairs[psi_pos / 2].first,
                       p.pairs[psibar_pos / 2].second);
    }
    if (pairing.sign < 0) {
      total -= product;
    } else {
      total += product;
    }
  }
  return total;
}

}  // namespace detail

// Brute-force Wick expansion: Σ over complete pairings of sign × Π of the
// matched two-point contractions. The ground truth the determinant and
// permanent formulas are checked against.
inline SymbolicSum oracle_expectation(const PairProduct& p,
                                      const PropagatorProvider& provider,
                                      std::size_t limit = kDefaultOracleLimit) {
  return detail::oracle_sum<SymbolicSum>(
      p, limit, [&](const PointLabel& l, const PointLabel& r) {
        return provider.symbolic_entry(p.statistics, l, r);
      });
}

inline ExactScalar oracle_expectation_numeric(
    const PairProduct& p, const PropagatorProvider& provider,
    std::size_t limit = kDefaultOracleLimit) {
  return detail::oracle_sum<ExactScalar>(
      p, limit, [&](const PointLabel& l, const PointLabel& r) {
        return provider.table_entry(l, r);
      });
}

}  // namespace wick
