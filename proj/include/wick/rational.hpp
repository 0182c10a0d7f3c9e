#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "wick/errors.hpp"

namespace wick {

using BigInt =
    boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                  boost::multiprecision::et_off>;

// Exact rational scalar, the value domain of every non-float code path.
// Stored in lowest terms with a positive denominator; arithmetic never rounds.
using ExactScalar = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<
        boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline ExactScalar make_rational(BigInt num, BigInt den) {
  if (den == 0) {
    throw SchemaError("rational with zero denominator");
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return ExactScalar(num, den);
}

// Accepts "p" or "p/q" with optional sign on p.
inline ExactScalar parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  const std::string num_part = text.substr(0, slash);
  const std::string den_part =
      slash == std::string::npos ? "1" : text.substr(slash + 1);
  auto valid_int = [](const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
  };
  if (!valid_int(num_part) || !valid_int(den_part)) {
    throw SchemaError("bad rational literal: \"" + text + "\"");
  }
  return make_rational(BigInt(num_part), BigInt(den_part));
}

// Always renders with an explicit denominator: "-3/2", "5/1".
inline std::string fraction_string(const ExactScalar& value) {
  return numerator(value).str() + "/" + denominator(value).str();
}

// "p" when q = 1, else "p/q"; used by the human-readable renderer.
inline std::string short_fraction_string(const ExactScalar& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

}  // namespace wick
