#pragma once

#include <map>
#include <utility>

#include "wick/errors.hpp"
#include "wick/operator_string.hpp"
#include "wick/rational.hpp"
#include "wick/symbolic_sum.hpp"
#include "wick/symbols.hpp"

namespace wick {

using PropagatorTable = std::map<std::pair<PointLabel, PointLabel>, ExactScalar>;

// Supplies contraction values. Symbolic mode emits Δ/Δ̄ atoms; table mode looks
// up exact rationals and treats a missing entry as a hard error — implicit
// zeros would silently mask configuration mistakes. Whether the table encodes
// vacuum or thermal averages is the caller's business; the algebra is the same.
class PropagatorProvider {
 public:
  enum class Mode { Symbolic, Table };

  static PropagatorProvider symbolic() { return PropagatorProvider(Mode::Symbolic, {}); }

  static PropagatorProvider table(PropagatorTable entries) {
    return PropagatorProvider(Mode::Table, std::move(entries));
  }

  Mode mode() const { return mode_; }

  SymbolicSum symbolic_entry(Statistics stat, const PointLabel& left,
                             const PointLabel& right) const {
    const auto flavor = stat == Statistics::Fermi
                            ? SymbolFlavor::FermiContraction
                            : SymbolFlavor::BoseContraction;
    return SymbolicSum::symbol(make_symbol(flavor, left, right));
  }

  const ExactScalar& table_entry(const PointLabel& left,
                                 const PointLabel& right) const {
    const auto it = table_.find({left, right});
    if (it == table_.end()) {
      throw MissingEntryError("no table entry for (" + left.token + ", " +
                              right.token + ")");
    }
    return it->second;
  }

  const PropagatorTable& table() const { return table_; }

 private:
  PropagatorProvider(Mode mode, PropagatorTable table)
      : mode_(mode), table_(std::move(table)) {}

  Mode mode_;
  PropagatorTable table_;
};

}  // namespace wick
