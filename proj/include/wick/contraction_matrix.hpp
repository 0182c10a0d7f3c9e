#pragma once

#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "wick/errors.hpp"
#include "wick/operator_string.hpp"
#include "wick/propagator.hpp"

namespace wick {

// The n×n matrix of contractions built from a pair product: rows follow the
// ψ/φ⁺ points in pair order, columns the ψ̄/φ⁻ points. Entry (α,β) is the
// contraction of row point α with column point β. n = 0 is a valid matrix.
template <typename T>
struct ContractionMatrix {
  Statistics statistics = Statistics::Fermi;
  std::vector<PointLabel> row_points;
  std::vector<PointLabel> col_points;
  std::vector<T> entries;  // row-major

  std::size_t n() const { return row_points.size(); }

  const T& at(std::size_t row, std::size_t col) const {
    return entries[row * n() + col];
  }
  T& at(std::size_t row, std::size_t col) { return entries[row * n() + col]; }
};

namespace detail {

template <typename T, typename EntryFn>
ContractionMatrix<T> build_matrix_with(const PairProduct& p, EntryFn&& entry) {
  ContractionMatrix<T> m;
  m.statistics = p.statistics;
  m.row_points.reserve(p.size());
  m.col_points.reserve(p.size());
  for (const auto& [left, right] : p.pairs) {
    m.row_points.push_back(left);
    m.col_points.push_back(right);
  }
  m.entries.reserve(p.size() * p.size());
  for (const auto& row : m.row_points) {
    for (const auto& col : m.col_points) {
      m.entries.push_back(entry(row, col));
    }
  }
  return m;
}

}  // namespace detail

inline ContractionMatrix<SymbolicSum> build_symbolic_matrix(
    const PairProduct& p, const PropagatorProvider& provider) {
  return detail::build_matrix_with<SymbolicSum>(
      p, [&](const PointLabel& l, const PointLabel& r) {
        return provider.symbolic_entry(p.statistics, l, r);
      });
}

// Requires a table-mode provider with all n² entries present.
inline ContractionMatrix<ExactScalar> build_numeric_matrix(
    const PairProduct& p, const PropagatorProvider& provider) {
  if (provider.mode() != PropagatorProvider::Mode::Table) {
    throw Error("build_numeric_matrix requires a table provider");
  }
  return detail::build_matrix_with<ExactScalar>(
      p, [&](const PointLabel& l, const PointLabel& r) {
        return provider.table_entry(l, r);
      });
}

// Zeroes every entry whose row point AND column point are both external.
// This is the linked-cluster reduction done at the matrix level.
template <typename T>
ContractionMatrix<T> zero_external_block(ContractionMatrix<T> m,
                                         const std::set<PointLabel>& externals) {
  const std::size_t n = m.n();
  for (std::size_t i = 0; i < n; ++i) {
    if (!externals.contains(m.row_points[i])) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (externals.contains(m.col_points[j])) {
        m.at(i, j) = T(0);
      }
    }
  }
  return m;
}

}  // namespace wick
