#pragma once

// Birkhoff-von Neumann propositions (subspace valued) and the computation
// tree temporal layer built on top of them.
//
// Formula syntax. Propositions live inside brackets and use the quantum
// connectives; everything outside brackets is the classical temporal layer.
//
//   state   = implies ;
//   implies = or ["->" implies] ;                 a -> b   is  !(a && !b)
//   or      = and {"||" and} ;                    a || b   is  !(!a && !b)
//   and     = unary {"&&" unary} ;
//   unary   = "!" unary | ("E" | "A") path | "true" | "false"
//           | "[" prop "]" | "(" state ")" ;
//   path    = "X" unary | "F" unary | "G" unary | "(" state "U" state ")" ;
//   prop    = pand {"|" pand} ;
//   pand    = pnot {"&" pnot} ;
//   pnot    = "~" pnot | IDENT | "true" | "false" | "(" prop ")" ;
//
// The fused forms EX AX EF AF EG AG are accepted as well. F and G are
// expanded while parsing: Q F f = Q (true U f), E G f = !A (true U !f),
// A G f = !E (true U !f). `~` is the orthocomplement, `!` classical negation.

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qmc/errors.hpp"
#include "qmc/linalg.hpp"

namespace qmc {

struct Proposition;
using PropPtr = std::shared_ptr<const Proposition>;

struct Proposition {
  enum class Kind { atom, truth, falsity, not_q, and_q, or_q };
  Kind kind;
  std::string name;  // atom only
  PropPtr lhs;       // not_q operand, binary left
  PropPtr rhs;       // binary right
  SourcePos pos;

  static PropPtr atom(std::string name, SourcePos pos = {});
  static PropPtr truth(SourcePos pos = {});
  static PropPtr falsity(SourcePos pos = {});
  static PropPtr not_q(PropPtr p, SourcePos pos = {});
  static PropPtr and_q(PropPtr a, PropPtr b, SourcePos pos = {});
  static PropPtr or_q(PropPtr a, PropPtr b, SourcePos pos = {});
};

struct StateFormula;
struct PathFormula;
using StatePtr = std::shared_ptr<const StateFormula>;
using PathPtr = std::shared_ptr<const PathFormula>;

struct StateFormula {
  enum class Kind { prop, exists, forall, negation, conjunction };
  Kind kind;
  PropPtr prop;  // prop
  PathPtr path;  // exists, forall
  StatePtr lhs;  // negation operand, conjunction left
  StatePtr rhs;  // conjunction right
  SourcePos pos;

  static StatePtr make_prop(PropPtr p, SourcePos pos = {});
  static StatePtr exists(PathPtr p, SourcePos pos = {});
  static StatePtr forall(PathPtr p, SourcePos pos = {});
  static StatePtr negation(StatePtr f, SourcePos pos = {});
  static StatePtr conjunction(StatePtr a, StatePtr b, SourcePos pos = {});
};

struct PathFormula {
  enum class Kind { next, until };
  Kind kind;
  StatePtr lhs;  // until left
  StatePtr rhs;  // next operand, until right
  SourcePos pos;

  static PathPtr next(StatePtr f, SourcePos pos = {});
  static PathPtr until(StatePtr a, StatePtr b, SourcePos pos = {});
};

/// Structural equality, ignoring source positions.
bool equal(const Proposition& a, const Proposition& b);
bool equal(const StateFormula& a, const StateFormula& b);
bool equal(const PathFormula& a, const PathFormula& b);

/// Atom name -> subspace, all of one ambient dimension.
struct Bindings {
  Eigen::Index dim = 0;
  std::map<std::string, Subspace> atoms;

  void bind(const std::string& name, Subspace s);
};

Subspace eval_prop(const Proposition& p, const Bindings& bindings);
/// supp(rho) is contained in [[p]].
bool satisfies_atomic(const CMatrix& rho, const Proposition& p, const Bindings& bindings);

/// Atom names in order of first occurrence.
std::vector<std::string> atoms(const StateFormula& f);
/// Throws UnboundAtom naming the first atom that `bindings` lacks.
void require_bound(const StateFormula& f, const Bindings& bindings);

StatePtr parse_formula(std::string_view text);
PropPtr parse_proposition(std::string_view text);

/// Fully parenthesised text that parses back to an equal AST.
std::string print(const Proposition& p);
std::string print(const StateFormula& f);
std::string print(const PathFormula& f);

namespace detail {
class TokenStream;
StatePtr parse_state(TokenStream& ts);
}  // namespace detail

}  // namespace qmc
