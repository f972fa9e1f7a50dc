#pragma once

// Assertion files: atom bindings followed by labelled formulas.
//
//   file      = {binding | assertion} ;
//   binding   = "let" IDENT "=" subspace ["on" targets] ;
//   subspace  = "span" "{" STRING {"," STRING} "}"     kets, see ket.hpp
//             | "range" matrix ;                       column space
//   assertion = "assert" STRING ":" state ;            state, see logic.hpp
//
// `on [t1,...,tk]` declares the subspace on those qubits only; the atom is
// then V on the targets tensored with the full space on the other qubits.

#include <string>
#include <string_view>
#include <vector>

#include "qmc/logic.hpp"

namespace qmc {

struct SubspaceSpec {
  enum class Kind { span, range };
  Kind kind = Kind::span;
  std::vector<std::string> kets;  // span
  CMatrix matrix;                 // range
  std::vector<int> on;            // empty: all qubits

  bool operator==(const SubspaceSpec& other) const;
};

struct AtomBinding {
  std::string name;
  SubspaceSpec spec;
  SourcePos pos;
};

struct Assertion {
  std::string label;
  StatePtr formula;
  SourcePos pos;
};

struct AssertionFile {
  std::vector<AtomBinding> bindings;
  std::vector<Assertion> assertions;
};

AssertionFile parse_assertions(std::string_view text);
std::string serialize_assertions(const AssertionFile& file);

/// Evaluates every binding for an `n_qubits` register. Errors in a binding
/// are reported as SyntaxError at its position.
Bindings bind(const AssertionFile& file, int n_qubits);
Subspace evaluate(const SubspaceSpec& spec, int n_qubits);

}  // namespace qmc
