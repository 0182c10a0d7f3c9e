#pragma once

#include <stdexcept>
#include <string>

namespace wick {

// Base class for everything this library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed textual/JSON input (bad rational literal, bad schema, unknown field).
struct SchemaError : Error {
  using Error::Error;
};

// Operator string whose psi/psibar (or phi+/phi-) counts do not balance.
struct MalformedStringError : Error {
  using Error::Error;
};

// Table lookup for a (left, right) point pair with no entry.
struct MissingEntryError : Error {
  using Error::Error;
};

// substitute() hit a symbol with no table value.
struct MissingSymbolError : Error {
  using Error::Error;
};

// Brute-force pairing enumeration asked for more pairs than the configured limit.
struct OracleLimitError : Error {
  using Error::Error;
};

// Row/column index or subset outside the matrix.
struct IndexError : Error {
  using Error::Error;
};

// Input does not have the structure an operation pattern-matches on.
struct StructureError : Error {
  using Error::Error;
};

// Perturbation order this engine does not generate.
struct UnsupportedOrderError : Error {
  using Error::Error;
};

}  // namespace wick
