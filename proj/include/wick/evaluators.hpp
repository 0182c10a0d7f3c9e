#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "wick/contraction_matrix.hpp"
#include "wick/errors.hpp"
#include "wick/rational.hpp"
#include "wick/symbolic_sum.hpp"

namespace wick {

namespace detail {

inline int permutation_parity(const std::vector<std::size_t>& perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) {
      if (perm[i] > perm[j]) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

// Sum over all permutations, with or without the sign. Reference
// implementation: n! terms, fine up to n ≈ 8.
template <typename T>
T permutation_sum(const ContractionMatrix<T>& m, bool signed_terms) {
  const std::size_t n = m.n();
  if (n == 0) return T(1);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  T total(0);
  do {
    T product(1);
    for (std::size_t i = 0; i < n; ++i) product *= m.at(i, perm[i]);
    if (signed_terms && permutation_parity(perm) < 0) {
      total -= product;
    } else {
      total += product;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

template <typename T>
ContractionMatrix<T> submatrix(const ContractionMatrix<T>& m,
                               const std::vector<std::size_t>& rows,
                               const std::vector<std::size_t>& cols) {
  ContractionMatrix<T> out;
  out.statistics = m.statistics;
  for (std::size_t r : rows) out.row_points.push_back(m.row_points[r]);
  for (std::size_t c : cols) out.col_points.push_back(m.col_points[c]);
  out.entries.reserve(rows.size() * cols.size());
  for (std::size_t r : rows) {
    for (std::size_t c : cols) out.entries.push_back(m.at(r, c));
  }
  return out;
}

}  // namespace detail

// Leibniz determinant: Σ_σ sgn(σ) Π_α entry(α, σ(α)). The n = 0 determinant
// is 1 (empty product). Kept as the reference implementation.
template <typename T>
T det_leibniz(const ContractionMatrix<T>& m) {
  return detail::permutation_sum(m, /*signed_terms=*/true);
}

// Permanent by direct enumeration: the Leibniz sum with every sign +1.
template <typename T>
T perm_naive(const ContractionMatrix<T>& m) {
  return detail::permutation_sum(m, /*signed_terms=*/false);
}

// Production determinant for symbolic (and small exact) matrices: expansion
// along the first live row, memoized on the live column mask. O(2ⁿ·n)
// subproblems instead of n! Leibniz terms.
template <typename T>
T det_minors(const ContractionMatrix<T>& m) {
  const std::size_t n = m.n();
  if (n == 0) return T(1);
  if (n > 63) throw Error("det_minors: matrix too large for subset masks");
  std::unordered_map<std::uint64_t, T> memo;
  auto rec = [&](auto&& self, std::uint64_t mask) -> T {
    if (mask == 0) return T(1);
    const auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    const std::size_t row =
        n - static_cast<std::size_t>(__builtin_popcountll(mask));
    T total(0);
    bool negative = false;
    for (std::size_t col = 0; col < n; ++col) {
      const std::uint64_t bit = std::uint64_t{1} << col;
      if (!(mask & bit)) continue;
      T contribution = m.at(row, col);
      contribution *= self(self, mask & ~bit);
      if (negative) {
        total -= contribution;
      } else {
        total += contribution;
      }
      negative = !negative;
    }
    memo.emplace(mask, total);
    return total;
  };
  return rec(rec, (std::uint64_t{1} << n) - 1);
}

// Fraction-free determinant: rows are scaled to integers, then Bareiss
// elimination keeps every intermediate an exact minor. Singular input gives 0.
// The elimination itself runs on GMP limbs; intermediate minors of a 200x200
// matrix run to thousands of bits and portable bignums don't keep up.
inline ExactScalar det_elimination(const ContractionMatrix<ExactScalar>& m) {
  using WorkInt = boost::multiprecision::mpz_int;
  const std::size_t n = m.n();
  if (n == 0) return ExactScalar(1);

  std::vector<std::vector<WorkInt>> a(n, std::vector<WorkInt>(n));
  BigInt scale(1);
  for (std::size_t i = 0; i < n; ++i) {
    BigInt row_lcm(1);
    for (std::size_t j = 0; j < n; ++j) {
      row_lcm = lcm(row_lcm, denominator(m.at(i, j)));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const ExactScalar& e = m.at(i, j);
      a[i][j] = WorkInt((numerator(e) * (row_lcm / denominator(e))).str());
    }
    scale *= row_lcm;
  }

  int sign = 1;
  WorkInt previous_pivot(1);
  WorkInt product, update;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && a[pivot][k] == 0) ++pivot;
    if (pivot == n) return ExactScalar(0);
    if (pivot != k) {
      std::swap(a[pivot], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        update = a[i][j] * a[k][k];
        product = a[i][k] * a[k][j];
        update -= product;
        mpz_divexact(a[i][j].backend().data(), update.backend().data(),
                     previous_pivot.backend().data());
      }
      a[i][k] = 0;
    }
    previous_pivot = a[k][k];
  }
  BigInt det_int(a[n - 1][n - 1].str());
  if (sign < 0) det_int = -det_int;
  return make_rational(det_int, scale);
}

// Ryser permanent with Gray-coded column-subset updates:
// perm(A) = Σ_{S≠∅} (−1)^{n−|S|} Π_i Σ_{j∈S} a_ij. O(2ⁿ·n) ring operations,
// valid over any ring with subtraction (exact, float, or symbolic).
template <typename T>
T perm_ryser(const ContractionMatrix<T>& m) {
  const std::size_t n = m.n();
  if (n == 0) return T(1);
  if (n > 62) throw Error("perm_ryser: matrix too large for subset masks");
  std::vector<T> row_sums(n, T(0));
  T total(0);
  std::uint64_t gray = 0;
  for (std::uint64_t index = 1; index < (std::uint64_t{1} << n); ++index) {
    const std::uint64_t next = index ^ (index >> 1);
    const std::uint64_t changed = next ^ gray;
    const auto col = static_cast<std::size_t>(__builtin_ctzll(changed));
    if (next & changed) {
      for (std::size_t i = 0; i < n; ++i) row_sums[i] += m.at(i, col);
    } else {
      for (std::size_t i = 0; i < n; ++i) row_sums[i] -= m.at(i, col);
    }
    gray = next;
    T product(1);
    for (std::size_t i = 0; i < n; ++i) product *= row_sums[i];
    const int popcount = __builtin_popcountll(next);
    if ((n - static_cast<std::size_t>(popcount)) % 2 == 1) {
      total -= product;
    } else {
      total += product;
    }
  }
  return total;
}

// --- structured expansions -------------------------------------------------

template <typename T>
struct RowExpansionTerm {
  std::size_t col = 0;  // 1-based
  int sign = 1;
  T entry{};
  T minor{};
};

template <typename T>
struct RowExpansion {
  std::vector<RowExpansionTerm<T>> summands;
  T total;
};

// Expansion along one row: n summands entry(row,β)·(−1)^(row+β)·minor, the
// matrix form of the generalized Wick decomposition. Bose matrices use the
// same column minors with every sign +1 and permanents for the minors.
template <typename T>
RowExpansion<T> expand_along_row(const ContractionMatrix<T>& m,
                                 std::size_t row) {
  const std::size_t n = m.n();
  if (row < 1 || row > n) {
    throw IndexError("expand_along_row: row " + std::to_string(row) +
                     " outside 1.." + std::to_string(n));
  }
  const bool fermi = m.statistics == Statistics::Fermi;
  std::vector<std::size_t> minor_rows;
  for (std::size_t r = 0; r < n; ++r) {
    if (r != row - 1) minor_rows.push_back(r);
  }
  RowExpansion<T> out;
  out.total = T(0);
  for (std::size_t col = 1; col <= n; ++col) {
    std::vector<std::size_t> minor_cols;
    for (std::size_t c = 0; c < n; ++c) {
      if (c != col - 1) minor_cols.push_back(c);
    }
    const auto sub = detail::submatrix(m, minor_rows, minor_cols);
    RowExpansionTerm<T> term;
    term.col = col;
    term.sign = fermi ? ((row + col) % 2 == 0 ? 1 : -1) : 1;
    term.entry = m.at(row - 1, col - 1);
    term.minor = fermi ? det_minors(sub) : perm_ryser(sub);
    T contribution = term.entry;
    contribution *= term.minor;
    if (term.sign < 0) {
      out.total -= contribution;
    } else {
      out.total += contribution;
    }
    out.summands.push_back(std::move(term));
  }
  return out;
}

template <typename T>
struct LaplaceTerm {
  std::vector<std::size_t> rows;  // 1-based, fixed across terms
  std::vector<std::size_t> cols;  // 1-based, one size-m subset per term
  int sign = 1;                   // (−1)^(Σ rows + Σ cols)
  T minor{};
  T complement{};
};

template <typename T>
struct LaplaceExpansion {
  std::vector<LaplaceTerm<T>> terms;
  T total;
};

// Generalized Laplace expansion over a fixed row subset: one term per column
// subset of the same size, C(n,m) terms in all, reassembling the determinant
// (or, for Bose statistics, the permanent with all signs +1).
template <typename T>
LaplaceExpansion<T> laplace_expand(const ContractionMatrix<T>& m,
                                   std::vector<std::size_t> rows) {
  const std::size_t n = m.n();
  std::sort(rows.begin(), rows.end());
  if (rows.empty() || rows.size() >= n) {
    throw IndexError("laplace_expand: need 1 ≤ m < n row indices");
  }
  if (std::adjacent_find(rows.begin(), rows.end()) != rows.end() ||
      rows.front() < 1 || rows.back() > n) {
    throw IndexError("laplace_expand: rows must be distinct and within 1..n");
  }
  const bool fermi = m.statistics == Statistics::Fermi;
  const std::size_t k = rows.size();

  std::vector<std::size_t> selected_rows, complement_rows;
  std::size_t row_index_sum = 0;
  for (std::size_t r = 1; r <= n; ++r) {
    if (std::binary_search(rows.begin(), rows.end(), r)) {
      selected_rows.push_back(r - 1);
      row_index_sum += r;
    } else {
      complement_rows.push_back(r - 1);
    }
  }

  LaplaceExpansion<T> out;
  out.total = T(0);
  std::vector<bool> selector(n, false);
  std::fill(selector.begin(), selector.begin() + static_cast<long>(k), true);
  // std::prev_permutation over the selector walks column subsets in
  // lexicographic order.
  do {
    std::vector<std::size_t> selected_cols, complement_cols;
    std::size_t col_index_sum = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (selector[c]) {
        selected_cols.push_back(c);
        col_index_sum += c + 1;
      } else {
        complement_cols.push_back(c);
      }
    }
    const auto minor_m = detail::submatrix(m, selected_rows, selected_cols);
    const auto comp_m = detail::submatrix(m, complement_rows, complement_cols);
    LaplaceTerm<T> term;
    term.rows.assign(rows.begin(), rows.end());
    for (std::size_t c : selected_cols) term.cols.push_back(c + 1);
    term.sign = fermi ? ((row_index_sum + col_index_sum) % 2 == 0 ? 1 : -1) : 1;
    term.minor = fermi ? det_minors(minor_m) : perm_ryser(minor_m);
    term.complement = fermi ? det_minors(comp_m) : perm_ryser(comp_m);
    T contribution = term.minor;
    contribution *= term.complement;
    if (term.sign < 0) {
      out.total -= contribution;
    } else {
      out.total += contribution;
    }
    out.terms.push_back(std::move(term));
  } while (std::prev_permutation(selector.begin(), selector.end()));
  return out;
}

// --- pair-product evaluation -------------------------------------------------

// det(fermi matrix) × perm(bose matrix); empty parts contribute 1.
inline SymbolicSum evaluate_pair_product(const PairProduct& fermi,
                                         const PairProduct& bose,
                                         const PropagatorProvider& provider) {
  SymbolicSum result = det_minors(build_symbolic_matrix(fermi, provider));
  result *= perm_ryser(build_symbolic_matrix(bose, provider));
  return result;
}

inline ExactScalar evaluate_pair_product_numeric(
    const PairProduct& fermi, const PairProduct& bose,
    const PropagatorProvider& provider) {
  ExactScalar result = det_elimination(build_numeric_matrix(fermi, provider));
  result *= perm_ryser(build_numeric_matrix(bose, provider));
  return result;
}

}  // namespace wick
