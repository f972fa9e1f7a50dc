#pragma once

// Textual model format for quantum transition systems. Grammar (EBNF):
//
//   model      = "qubits" INT
//                "locations" IDENT {IDENT}
//                "initial" IDENT
//                "transitions" {transition} ;
//   transition = IDENT "->" IDENT ":" op ;
//   op         = "gate" IDENT ["(" real {"," real} ")"] targets
//              | "kraus" "{" matrix {";" matrix} "}" targets
//              | "measure" IDENT targets "=" INT ;
//   targets    = "[" INT {"," INT} "]" ;
//   matrix     = "[" row {"," row} "]" ;   row = "[" complex {"," complex} "]" ;
//   complex    = ["+"|"-"] term {("+"|"-") term} ;   term = NUMBER ["i"] | "i" ;
//
// `gate` accepts the names of gate_library and noise_library (noise takes
// its probability as the single parameter). `#` starts a comment. Kraus
// matrices are given in the local order of their targets.

#include <string>
#include <string_view>

#include "qmc/qts.hpp"

namespace qmc {

/// Throws SyntaxError (with line and column) for malformed text and
/// NormalisationViolation (located at the offending location's first
/// outgoing transition) when sum E^dag E != I.
QuantumTransitionSystem parse_model(std::string_view text);

/// Canonical text; parse_model(serialize_model(s)) == s.
std::string serialize_model(const QuantumTransitionSystem& sys);

/// Shortest text that reads back to exactly the same double.
std::string format_real(double x);
/// `a`, `bi`, or `a+bi` / `a-bi`.
std::string format_complex(Complex z);
/// `[[a, b], [c, d]]`
std::string format_matrix(const CMatrix& m);
/// Parses a standalone matrix literal (used for density-matrix files).
CMatrix parse_matrix_literal(std::string_view text);

}  // namespace qmc
