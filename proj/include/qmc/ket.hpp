#pragma once

// Dirac-notation state vectors such as "(|00> + |11>)/sqrt2" or
// "0.6|0> + 0.8i|1>".
//
//   expr   = term {("+" | "-") term} ;
//   term   = factor {["*" | "/"] factor} ;      juxtaposition multiplies
//   factor = ("-" | "+") factor | NUMBER | "i" | "sqrt" (NUMBER | "(" expr ")")
//          | "|" {"0" | "1" | "+" | "-"} ">" | "(" expr ")" ;
//
// The first character of a ket is qubit 1. `sqrt2` is accepted as shorthand
// for sqrt 2. The result must be a vector, not a scalar.

#include <string_view>

#include "qmc/linalg.hpp"

namespace qmc {

/// Unnormalised vector on `n_qubits` qubits. Every ket must have exactly
/// `n_qubits` characters. Throws SyntaxError (column is 1-based within the
/// text, line 1) on malformed input.
CVector parse_ket(std::string_view text, int n_qubits);

/// parse_ket followed by normalisation; a zero vector is an error.
CVector parse_state_vector(std::string_view text, int n_qubits);

}  // namespace qmc
