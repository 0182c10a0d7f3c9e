#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "wick/contraction_matrix.hpp"
#include "wick/operator_string.hpp"
#include "wick/propagator.hpp"
#include "wick/rational.hpp"

namespace wick {

// Seeded generators shared by the bench command and the verification suites.
// Same seed, same matrix, every run.

inline ExactScalar random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-99, 99);
  std::uniform_int_distribution<int> den(1, 9);
  return make_rational(num(rng), den(rng));
}

inline ContractionMatrix<ExactScalar> random_rational_matrix(
    std::size_t n, std::uint64_t seed,
    Statistics statistics = Statistics::Fermi) {
  std::mt19937_64 rng(seed);
  ContractionMatrix<ExactScalar> m;
  m.statistics = statistics;
  for (std::size_t i = 0; i < n; ++i) {
    m.row_points.push_back(PointLabel{"r" + std::to_string(i + 1)});
    m.col_points.push_back(PointLabel{"c" + std::to_string(i + 1)});
  }
  m.entries.reserve(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    m.entries.push_back(random_rational(rng));
  }
  return m;
}

inline ContractionMatrix<double> random_double_matrix(
    std::size_t n, std::uint64_t seed,
    Statistics statistics = Statistics::Bose) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  ContractionMatrix<double> m;
  m.statistics = statistics;
  for (std::size_t i = 0; i < n; ++i) {
    m.row_points.push_back(PointLabel{"r" + std::to_string(i + 1)});
    m.col_points.push_back(PointLabel{"c" + std::to_string(i + 1)});
  }
  m.entries.reserve(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    m.entries.push_back(dist(rng));
  }
  return m;
}

// A table provider with one entry per (row point, column point) combination
// of an n-pair product, plus the pair product itself.
struct RandomPairInstance {
  PairProduct pairs;
  PropagatorProvider provider = PropagatorProvider::symbolic();
};

inline RandomPairInstance random_pair_instance(std::size_t n,
                                               std::uint64_t seed,
                                               Statistics statistics) {
  std::mt19937_64 rng(seed);
  RandomPairInstance out;
  out.pairs.statistics = statistics;
  PropagatorTable table;
  std::vector<PointLabel> lefts, rights;
  for (std::size_t i = 0; i < n; ++i) {
    lefts.push_back(PointLabel{"a" + std::to_string(i + 1)});
    rights.push_back(PointLabel{"b" + std::to_string(i + 1)});
    out.pairs.pairs.emplace_back(lefts.back(), rights.back());
  }
  for (const auto& l : lefts) {
    for (const auto& r : rights) {
      table[{l, r}] = random_rational(rng);
    }
  }
  out.provider = PropagatorProvider::table(std::move(table));
  return out;
}

}  // namespace wick
