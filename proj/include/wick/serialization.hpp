#pragma once

#include <json.hpp>

#include <algorithm>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wick/errors.hpp"
#include "wick/operator_string.hpp"
#include "wick/perturbation.hpp"
#include "wick/propagator.hpp"
#include "wick/rational.hpp"
#include "wick/symbolic_sum.hpp"
#include "wick/symbols.hpp"

namespace wick {

// Key order is part of the output contract, so everything below uses
// ordered_json: a fixed input always serializes to the same bytes.
using Json = nlohmann::ordered_json;

inline const char* flavor_name(SymbolFlavor f) {
  switch (f) {
    case SymbolFlavor::FermiContraction: return "Delta";
    case SymbolFlavor::BoseContraction: return "DeltaBar";
    case SymbolFlavor::BarePropagator: return "G0";
    case SymbolFlavor::Potential: return "V";
    case SymbolFlavor::DiracDelta: return "delta";
  }
  return "";
}

inline SymbolFlavor parse_flavor(const std::string& name) {
  if (name == "Delta") return SymbolFlavor::FermiContraction;
  if (name == "DeltaBar") return SymbolFlavor::BoseContraction;
  if (name == "G0") return SymbolFlavor::BarePropagator;
  if (name == "V") return SymbolFlavor::Potential;
  if (name == "delta") return SymbolFlavor::DiracDelta;
  throw SchemaError("unknown symbol flavor \"" + name + "\"");
}

namespace detail {

inline void require_object_keys(const Json& j,
                                const std::vector<std::string>& allowed,
                                const std::string& where) {
  if (!j.is_object()) {
    throw SchemaError(where + ": expected a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw SchemaError(where + ": unknown field \"" + key + "\"");
    }
  }
}

inline const Json& require_field(const Json& j, const std::string& key,
                                 const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw SchemaError(where + ": missing field \"" + key + "\"");
  }
  return *it;
}

inline std::string require_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError(where + ": expected a string");
  return j.get<std::string>();
}

inline PointLabel require_point(const Json& j, const std::string& where) {
  const std::string token = require_string(j, where);
  if (token.empty()) throw SchemaError(where + ": point token must be nonempty");
  return PointLabel{token};
}

}  // namespace detail

// --- SymbolicSum <-> JSON ----------------------------------------------------

// Canonical form: a JSON array of terms, each
//   {"coeff": "p/q", "factors": [["flavor","left","right"], ...]},
// terms and factors in canonical order. Byte-stable across runs.
inline Json to_json(const SymbolicSum& sum) {
  Json terms = Json::array();
  for (const auto& term : sum.terms()) {
    Json factors = Json::array();
    for (const auto& f : term.factors) {
      factors.push_back(Json::array(
          {flavor_name(f.flavor), f.left.token, f.right.token}));
    }
    terms.push_back(Json{{"coeff", fraction_string(term.coeff)},
                         {"factors", std::move(factors)}});
  }
  return terms;
}

inline SymbolicSum sum_from_json(const Json& j) {
  if (!j.is_array()) {
    throw SchemaError("symbolic sum: expected an array of terms");
  }
  std::vector<Monomial> terms;
  for (const auto& t : j) {
    detail::require_object_keys(t, {"coeff", "factors"}, "term");
    Monomial m;
    m.coeff = parse_rational(
        detail::require_string(detail::require_field(t, "coeff", "term"),
                               "coeff"));
    const Json& factors = detail::require_field(t, "factors", "term");
    if (!factors.is_array()) throw SchemaError("factors: expected an array");
    for (const auto& f : factors) {
      if (!f.is_array() || f.size() != 3) {
        throw SchemaError("factor: expected [flavor, left, right]");
      }
      m.factors.push_back(
          make_symbol(parse_flavor(detail::require_string(f[0], "flavor")),
                      detail::require_point(f[1], "factor left"),
                      detail::require_point(f[2], "factor right")));
    }
    terms.push_back(std::move(m));
  }
  return SymbolicSum::from_terms(std::move(terms));
}

// --- Green's function results -------------------------------------------------

inline Json to_json(const GreensResult& result) {
  Json externals = Json::array();
  for (const auto& p : result.external_points) externals.push_back(p.token);
  Json dummies = Json::array();
  for (const auto& p : result.integration_vars) dummies.push_back(p.token);
  return Json{{"externals", std::move(externals)},
              {"integration_vars", std::move(dummies)},
              {"terms", to_json(result.expression)}};
}

// --- problem files -------------------------------------------------------------

// A problem is either an operator string or a single-statistics pair product,
// plus the provider that gives the contractions values:
//   {"problem": {"ops": [{"kind":"psi","point":"x1"}, ...]},
//    "provider": {"mode": "symbolic"}}
//   {"problem": {"statistics": "fermi", "pairs": [["x1","x2"], ...]},
//    "provider": {"mode": "table", "entries": [
//        {"left": "x1", "right": "x2", "value": "3/2"}, ...]}}
struct ProblemFile {
  std::variant<OperatorString, PairProduct> input;
  PropagatorProvider provider = PropagatorProvider::symbolic();
};

inline FieldKind parse_kind(const std::string& name) {
  if (name == "psi") return FieldKind::Psi;
  if (name == "psibar") return FieldKind::PsiBar;
  if (name == "phi_plus") return FieldKind::PhiPlus;
  if (name == "phi_minus") return FieldKind::PhiMinus;
  throw SchemaError("unknown operator kind \"" + name + "\"");
}

inline Statistics parse_statistics(const std::string& name) {
  if (name == "fermi") return Statistics::Fermi;
  if (name == "bose") return Statistics::Bose;
  throw SchemaError("unknown statistics \"" + name + "\"");
}

inline PairProduct pair_product_from_json(const Json& j) {
  detail::require_object_keys(j, {"statistics", "pairs"}, "pair product");
  PairProduct p;
  p.statistics = parse_statistics(detail::require_string(
      detail::require_field(j, "statistics", "pair product"), "statistics"));
  const Json& pairs = detail::require_field(j, "pairs", "pair product");
  if (!pairs.is_array()) throw SchemaError("pairs: expected an array");
  for (const auto& pair : pairs) {
    if (!pair.is_array() || pair.size() != 2) {
      throw SchemaError("pair: expected [left, right]");
    }
    p.pairs.emplace_back(detail::require_point(pair[0], "pair left"),
                         detail::require_point(pair[1], "pair right"));
  }
  return p;
}

inline OperatorString operator_string_from_json(const Json& j) {
  detail::require_object_keys(j, {"ops"}, "operator string");
  const Json& ops = detail::require_field(j, "ops", "operator string");
  if (!ops.is_array()) throw SchemaError("ops: expected an array");
  OperatorString s;
  for (const auto& op : ops) {
    detail::require_object_keys(op, {"kind", "point"}, "operator");
    s.ops.push_back(FieldOperator{
        parse_kind(detail::require_string(
            detail::require_field(op, "kind", "operator"), "kind")),
        detail::require_point(detail::require_field(op, "point", "operator"),
                              "operator point")});
  }
  return s;
}

inline PropagatorProvider provider_from_json(const Json& j) {
  detail::require_object_keys(j, {"mode", "entries"}, "provider");
  const std::string mode = detail::require_string(
      detail::require_field(j, "mode", "provider"), "mode");
  if (mode == "symbolic") {
    if (j.contains("entries")) {
      throw SchemaError("provider: symbolic mode takes no entries");
    }
    return PropagatorProvider::symbolic();
  }
  if (mode != "table") {
    throw SchemaError("provider: unknown mode \"" + mode + "\"");
  }
  const Json& entries = detail::require_field(j, "entries", "provider");
  if (!entries.is_array()) throw SchemaError("entries: expected an array");
  PropagatorTable table;
  for (const auto& e : entries) {
    detail::require_object_keys(e, {"left", "right", "value"}, "table entry");
    auto left = detail::require_point(
        detail::require_field(e, "left", "table entry"), "entry left");
    auto right = detail::require_point(
        detail::require_field(e, "right", "table entry"), "entry right");
    auto value = parse_rational(detail::require_string(
        detail::require_field(e, "value", "table entry"), "entry value"));
    table[{std::move(left), std::move(right)}] = std::move(value);
  }
  return PropagatorProvider::table(std::move(table));
}

inline ProblemFile problem_from_json(const Json& j) {
  detail::require_object_keys(j, {"problem", "provider"}, "problem file");
  const Json& problem = detail::require_field(j, "problem", "problem file");
  ProblemFile out;
  if (problem.is_object() && problem.contains("ops")) {
    out.input = operator_string_from_json(problem);
  } else {
    out.input = pair_product_from_json(problem);
  }
  out.provider = provider_from_json(
      detail::require_field(j, "provider", "problem file"));
  return out;
}

}  // namespace wick
