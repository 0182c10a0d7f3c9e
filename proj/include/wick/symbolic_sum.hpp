#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wick/errors.hpp"
#include "wick/rational.hpp"
#include "wick/symbols.hpp"

namespace wick {

// A rational coefficient times a multiset of symbols. Factors are kept sorted
// by the canonical (flavor, left, right) order.
struct Monomial {
  ExactScalar coeff = 0;
  std::vector<ContractionSymbol> factors;

  bool operator==(const Monomial& other) const {
    return coeff == other.coeff && factors == other.factors;
  }
};

// Canonical sum of monomials: terms sorted by factor multiset, like terms
// merged, zero coefficients dropped. The empty sum is 0; a single factor-free
// monomial with coefficient 1 is 1. Instances are immutable values in spirit:
// every operation returns a new canonical sum.
class SymbolicSum {
 public:
  SymbolicSum() = default;

  SymbolicSum(int constant) : SymbolicSum(ExactScalar(constant)) {}

  explicit SymbolicSum(const ExactScalar& constant) {
    if (constant != 0) {
      terms_.push_back(Monomial{constant, {}});
    }
  }

  static SymbolicSum symbol(const ContractionSymbol& s) {
    SymbolicSum out;
    out.terms_.push_back(Monomial{ExactScalar(1), {s}});
    return out;
  }

  // Accepts arbitrary (unsorted, duplicated, zero-laden) terms and normalizes.
  static SymbolicSum from_terms(std::vector<Monomial> terms) {
    SymbolicSum out;
    out.terms_ = canonicalize(std::move(terms));
    return out;
  }

  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool operator==(const SymbolicSum& other) const {
    return terms_ == other.terms_;
  }

  SymbolicSum operator-() const {
    SymbolicSum out = *this;
    for (auto& t : out.terms_) t.coeff = -t.coeff;
    return out;
  }

  SymbolicSum& operator+=(const SymbolicSum& other) {
    std::vector<Monomial> merged = terms_;
    merged.insert(merged.end(), other.terms_.begin(), other.terms_.end());
    terms_ = canonicalize(std::move(merged));
    return *this;
  }

  SymbolicSum& operator-=(const SymbolicSum& other) { return *this += -other; }

  SymbolicSum& operator*=(const SymbolicSum& other) {
    std::vector<Monomial> products;
    products.reserve(terms_.size() * other.terms_.size());
    for (const auto& a : terms_) {
      for (const auto& b : other.terms_) {
        Monomial m;
        m.coeff = a.coeff * b.coeff;
        m.factors.resize(a.factors.size() + b.factors.size());
        std::merge(a.factors.begin(), a.factors.end(), b.factors.begin(),
                   b.factors.end(), m.factors.begin());
        products.push_back(std::move(m));
      }
    }
    terms_ = canonicalize(std::move(products));
    return *this;
  }

  SymbolicSum& operator*=(const ExactScalar& scalar) {
    if (scalar == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& t : terms_) t.coeff *= scalar;
    return *this;
  }

  friend SymbolicSum operator+(SymbolicSum a, const SymbolicSum& b) {
    a += b;
    return a;
  }
  friend SymbolicSum operator-(SymbolicSum a, const SymbolicSum& b) {
    a -= b;
    return a;
  }
  friend SymbolicSum operator*(SymbolicSum a, const SymbolicSum& b) {
    a *= b;
    return a;
  }
  friend SymbolicSum operator*(const ExactScalar& s, SymbolicSum a) {
    a *= s;
    return a;
  }

 private:
  static std::vector<Monomial> canonicalize(std::vector<Monomial> terms) {
    for (auto& t : terms) {
      std::sort(t.factors.begin(), t.factors.end());
    }
    std::sort(terms.begin(), terms.end(),
              [](const Monomial& a, const Monomial& b) {
                return a.factors < b.factors;
              });
    std::vector<Monomial> out;
    for (auto& t : terms) {
      if (!out.empty() && out.back().factors == t.factors) {
        out.back().coeff += t.coeff;
      } else {
        out.push_back(std::move(t));
      }
    }
    std::erase_if(out, [](const Monomial& m) { return m.coeff == 0; });
    return out;
  }

  std::vector<Monomial> terms_;
};

// Re-canonicalization entry point. Idempotent and value-preserving; sums built
// through the class API are already canonical, so this is mainly useful after
// hand-assembling terms.
inline SymbolicSum normalize(const SymbolicSum& s) {
  return SymbolicSum::from_terms(s.terms());
}

using SubstitutionTable = std::map<ContractionSymbol, ExactScalar>;

// Exact numeric evaluation. Every symbol must resolve through the table.
inline ExactScalar substitute(const SymbolicSum& s,
                              const SubstitutionTable& table) {
  ExactScalar total(0);
  for (const auto& term : s.terms()) {
    ExactScalar product = term.coeff;
    for (const auto& factor : term.factors) {
      const auto it = table.find(factor);
      if (it == table.end()) {
        throw MissingSymbolError("no table value for symbol " + render(factor));
      }
      product *= it->second;
    }
    total += product;
  }
  return total;
}

// Human-readable form, e.g. "-V(z1-z2)·G0(z1,z2) + δ(z1-z2)·V(z1-z)·G0(z,z)".
inline std::string render(const SymbolicSum& s) {
  if (s.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& term : s.terms()) {
    const bool negative = term.coeff < 0;
    ExactScalar magnitude = negative ? ExactScalar(-term.coeff) : term.coeff;
    if (first) {
      if (negative) out += "-";
      first = false;
    } else {
      out += negative ? " - " : " + ";
    }
    const bool coeff_shown = magnitude != 1 || term.factors.empty();
    if (coeff_shown) out += short_fraction_string(magnitude);
    bool need_separator = coeff_shown;
    for (const auto& factor : term.factors) {
      if (need_separator) out += "·";
      out += render(factor);
      need_separator = true;
    }
  }
  return out;
}

}  // namespace wick
