#pragma once

// Umbrella header: time-ordered pair averages as determinants/permanents,
// the brute-force pairing oracle, block expansions, and the first-order
// thermal Green's function pipeline.

#include "wick/contraction_matrix.hpp"
#include "wick/errors.hpp"
#include "wick/evaluators.hpp"
#include "wick/operator_string.hpp"
#include "wick/pairing_oracle.hpp"
#include "wick/perturbation.hpp"
#include "wick/propagator.hpp"
#include "wick/random_matrices.hpp"
#include "wick/rational.hpp"
#include "wick/serialization.hpp"
#include "wick/symbolic_sum.hpp"
#include "wick/symbols.hpp"
