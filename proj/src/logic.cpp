#include "qmc/logic.hpp"

#include <algorithm>

#include "lexer.hpp"

namespace qmc {

using detail::Token;
using detail::TokenKind;
using detail::TokenStream;

namespace {

PropPtr make(Proposition::Kind k, std::string name, PropPtr a, PropPtr b, SourcePos pos) {
  return std::make_shared<const Proposition>(Proposition{k, std::move(name), std::move(a), std::move(b), pos});
}

StatePtr make(StateFormula::Kind k, PropPtr p, PathPtr path, StatePtr a, StatePtr b, SourcePos pos) {
  return std::make_shared<const StateFormula>(
      StateFormula{k, std::move(p), std::move(path), std::move(a), std::move(b), pos});
}

template <class T>
bool same(const std::shared_ptr<const T>& a, const std::shared_ptr<const T>& b) {
  if (!a || !b) return !a && !b;
  return equal(*a, *b);
}

}  // namespace

PropPtr Proposition::atom(std::string name, SourcePos pos) {
  return make(Kind::atom, std::move(name), nullptr, nullptr, pos);
}
PropPtr Proposition::truth(SourcePos pos) { return make(Kind::truth, "", nullptr, nullptr, pos); }
PropPtr Proposition::falsity(SourcePos pos) { return make(Kind::falsity, "", nullptr, nullptr, pos); }
PropPtr Proposition::not_q(PropPtr p, SourcePos pos) {
  return make(Kind::not_q, "", std::move(p), nullptr, pos);
}
PropPtr Proposition::and_q(PropPtr a, PropPtr b, SourcePos pos) {
  return make(Kind::and_q, "", std::move(a), std::move(b), pos);
}
PropPtr Proposition::or_q(PropPtr a, PropPtr b, SourcePos pos) {
  return make(Kind::or_q, "", std::move(a), std::move(b), pos);
}

StatePtr StateFormula::make_prop(PropPtr p, SourcePos pos) {
  return make(Kind::prop, std::move(p), nullptr, nullptr, nullptr, pos);
}
StatePtr StateFormula::exists(PathPtr p, SourcePos pos) {
  return make(Kind::exists, nullptr, std::move(p), nullptr, nullptr, pos);
}
StatePtr StateFormula::forall(PathPtr p, SourcePos pos) {
  return make(Kind::forall, nullptr, std::move(p), nullptr, nullptr, pos);
}
StatePtr StateFormula::negation(StatePtr f, SourcePos pos) {
  return make(Kind::negation, nullptr, nullptr, std::move(f), nullptr, pos);
}
StatePtr StateFormula::conjunction(StatePtr a, StatePtr b, SourcePos pos) {
  return make(Kind::conjunction, nullptr, nullptr, std::move(a), std::move(b), pos);
}

PathPtr PathFormula::next(StatePtr f, SourcePos pos) {
  return std::make_shared<const PathFormula>(PathFormula{Kind::next, nullptr, std::move(f), pos});
}
PathPtr PathFormula::until(StatePtr a, StatePtr b, SourcePos pos) {
  return std::make_shared<const PathFormula>(PathFormula{Kind::until, std::move(a), std::move(b), pos});
}

bool equal(const Proposition& a, const Proposition& b) {
  return a.kind == b.kind && a.name == b.name && same(a.lhs, b.lhs) && same(a.rhs, b.rhs);
}
bool equal(const StateFormula& a, const StateFormula& b) {
  return a.kind == b.kind && same(a.prop, b.prop) && same(a.path, b.path) && same(a.lhs, b.lhs) &&
         same(a.rhs, b.rhs);
}
bool equal(const PathFormula& a, const PathFormula& b) {
  return a.kind == b.kind && same(a.lhs, b.lhs) && same(a.rhs, b.rhs);
}

// ---- semantics --------------------------------------------------------------

void Bindings::bind(const std::string& name, Subspace s) {
  if (dim == 0) dim = s.ambient_dim();
  if (s.ambient_dim() != dim) {
    throw DimensionMismatch("atom '" + name + "' has ambient dimension " +
                            std::to_string(s.ambient_dim()) + ", expected " + std::to_string(dim));
  }
  atoms.insert_or_assign(name, std::move(s));
}

Subspace eval_prop(const Proposition& p, const Bindings& bindings) {
  switch (p.kind) {
    case Proposition::Kind::atom: {
      auto it = bindings.atoms.find(p.name);
      if (it == bindings.atoms.end()) throw UnboundAtom("unbound atom '" + p.name + "'");
      return it->second;
    }
    case Proposition::Kind::truth:
      return Subspace::full(bindings.dim);
    case Proposition::Kind::falsity:
      return Subspace::zero(bindings.dim);
    case Proposition::Kind::not_q:
      return orthocomplement(eval_prop(*p.lhs, bindings));
    case Proposition::Kind::and_q:
      return intersect(eval_prop(*p.lhs, bindings), eval_prop(*p.rhs, bindings));
    case Proposition::Kind::or_q:
      return join(eval_prop(*p.lhs, bindings), eval_prop(*p.rhs, bindings));
  }
  throw Error("corrupt proposition");
}

bool satisfies_atomic(const CMatrix& rho, const Proposition& p, const Bindings& bindings) {
  if (rho.rows() != bindings.dim || rho.cols() != bindings.dim) {
    throw DimensionMismatch("state dimension does not match the atom bindings");
  }
  return contains(eval_prop(p, bindings), support(rho));
}

namespace {

void collect(const Proposition& p, std::vector<std::string>& out) {
  if (p.kind == Proposition::Kind::atom) {
    if (std::find(out.begin(), out.end(), p.name) == out.end()) out.push_back(p.name);
  }
  if (p.lhs) collect(*p.lhs, out);
  if (p.rhs) collect(*p.rhs, out);
}

void collect(const StateFormula& f, std::vector<std::string>& out) {
  if (f.prop) collect(*f.prop, out);
  if (f.path) {
    if (f.path->lhs) collect(*f.path->lhs, out);
    collect(*f.path->rhs, out);
  }
  if (f.lhs) collect(*f.lhs, out);
  if (f.rhs) collect(*f.rhs, out);
}

}  // namespace

std::vector<std::string> atoms(const StateFormula& f) {
  std::vector<std::string> out;
  collect(f, out);
  return out;
}

void require_bound(const StateFormula& f, const Bindings& bindings) {
  for (const auto& a : atoms(f)) {
    if (!bindings.atoms.count(a)) throw UnboundAtom("unbound atom '" + a + "'");
  }
}

// ---- parser -----------------------------------------------------------------

namespace {

PropPtr parse_por(TokenStream& ts);

PropPtr parse_pnot(TokenStream& ts) {
  const Token& t = ts.peek();
  if (ts.accept_punct("~")) return Proposition::not_q(parse_pnot(ts), t.pos);
  if (ts.accept_punct("(")) {
    PropPtr p = parse_por(ts);
    ts.expect_punct(")");
    return p;
  }
  if (t.kind == TokenKind::ident) {
    ts.next();
    if (t.text == "true") return Proposition::truth(t.pos);
    if (t.text == "false") return Proposition::falsity(t.pos);
    return Proposition::atom(t.text, t.pos);
  }
  ts.fail("expected a proposition, found " + detail::describe(t));
}

PropPtr parse_pand(TokenStream& ts) {
  PropPtr p = parse_pnot(ts);
  while (ts.is_punct("&")) {
    const SourcePos pos = ts.next().pos;
    p = Proposition::and_q(p, parse_pnot(ts), pos);
  }
  return p;
}

PropPtr parse_por(TokenStream& ts) {
  PropPtr p = parse_pand(ts);
  while (ts.is_punct("|")) {
    const SourcePos pos = ts.next().pos;
    p = Proposition::or_q(p, parse_pand(ts), pos);
  }
  return p;
}

StatePtr parse_unary(TokenStream& ts);

StatePtr true_state(SourcePos pos) { return StateFormula::make_prop(Proposition::truth(pos), pos); }

// Path operator letter already identified; builds the quantified state.
StatePtr quantified(TokenStream& ts, char quant, char op, SourcePos pos) {
  auto wrap = [&](char q, PathPtr path) {
    return q == 'E' ? StateFormula::exists(std::move(path), pos)
                    : StateFormula::forall(std::move(path), pos);
  };
  switch (op) {
    case 'X':
      return wrap(quant, PathFormula::next(parse_unary(ts), pos));
    case 'F':
      return wrap(quant, PathFormula::until(true_state(pos), parse_unary(ts), pos));
    case 'G': {
      StatePtr body = StateFormula::negation(parse_unary(ts), pos);
      return StateFormula::negation(
          wrap(quant == 'E' ? 'A' : 'E', PathFormula::until(true_state(pos), body, pos)), pos);
    }
    default: {
      ts.expect_punct("(");
      StatePtr lhs = detail::parse_state(ts);
      const SourcePos upos = ts.expect_ident("U").pos;
      StatePtr rhs = detail::parse_state(ts);
      ts.expect_punct(")");
      return wrap(quant, PathFormula::until(lhs, rhs, upos));
    }
  }
}

StatePtr parse_unary(TokenStream& ts) {
  const Token& t = ts.peek();
  if (ts.accept_punct("!")) return StateFormula::negation(parse_unary(ts), t.pos);
  if (ts.accept_punct("(")) {
    StatePtr f = detail::parse_state(ts);
    ts.expect_punct(")");
    return f;
  }
  if (ts.accept_punct("[")) {
    PropPtr p = parse_por(ts);
    ts.expect_punct("]");
    return StateFormula::make_prop(p, t.pos);
  }
  if (t.kind == TokenKind::ident) {
    if (t.text == "true" || t.text == "false") {
      ts.next();
      return StateFormula::make_prop(t.text == "true" ? Proposition::truth(t.pos)
                                                      : Proposition::falsity(t.pos),
                                     t.pos);
    }
    if (t.text == "E" || t.text == "A") {
      ts.next();
      const Token& op = ts.peek();
      if (op.kind == TokenKind::ident && (op.text == "X" || op.text == "F" || op.text == "G")) {
        ts.next();
        return quantified(ts, t.text[0], op.text[0], t.pos);
      }
      if (ts.is_punct("(")) return quantified(ts, t.text[0], 'U', t.pos);
      ts.fail("expected X, F, G or '(' after path quantifier, found " + detail::describe(op));
    }
    if (t.text.size() == 2 && (t.text[0] == 'E' || t.text[0] == 'A') &&
        (t.text[1] == 'X' || t.text[1] == 'F' || t.text[1] == 'G')) {
      ts.next();
      return quantified(ts, t.text[0], t.text[1], t.pos);
    }
  }
  ts.fail("expected a state formula, found " + detail::describe(t));
}

StatePtr parse_and(TokenStream& ts) {
  StatePtr f = parse_unary(ts);
  while (ts.is_punct("&&")) {
    const SourcePos pos = ts.next().pos;
    f = StateFormula::conjunction(f, parse_unary(ts), pos);
  }
  return f;
}

StatePtr parse_or(TokenStream& ts) {
  StatePtr f = parse_and(ts);
  while (ts.is_punct("||")) {
    const SourcePos pos = ts.next().pos;
    StatePtr g = parse_and(ts);
    f = StateFormula::negation(
        StateFormula::conjunction(StateFormula::negation(f, pos), StateFormula::negation(g, pos), pos),
        pos);
  }
  return f;
}

}  // namespace

StatePtr detail::parse_state(TokenStream& ts) {
  StatePtr f = parse_or(ts);
  if (ts.is_punct("->")) {
    const SourcePos pos = ts.next().pos;
    StatePtr g = detail::parse_state(ts);
    return StateFormula::negation(StateFormula::conjunction(f, StateFormula::negation(g, pos), pos),
                                  pos);
  }
  return f;
}

StatePtr parse_formula(std::string_view text) {
  TokenStream ts(detail::tokenize(text));
  StatePtr f = detail::parse_state(ts);
  if (!ts.at_end()) ts.fail("unexpected " + detail::describe(ts.peek()) + " after formula");
  return f;
}

PropPtr parse_proposition(std::string_view text) {
  TokenStream ts(detail::tokenize(text));
  PropPtr p = parse_por(ts);
  if (!ts.at_end()) ts.fail("unexpected " + detail::describe(ts.peek()) + " after proposition");
  return p;
}

// ---- printer ----------------------------------------------------------------

std::string print(const Proposition& p) {
  switch (p.kind) {
    case Proposition::Kind::atom:
      return p.name;
    case Proposition::Kind::truth:
      return "true";
    case Proposition::Kind::falsity:
      return "false";
    case Proposition::Kind::not_q:
      return "~" + print(*p.lhs);
    case Proposition::Kind::and_q:
      return "(" + print(*p.lhs) + " & " + print(*p.rhs) + ")";
    case Proposition::Kind::or_q:
      return "(" + print(*p.lhs) + " | " + print(*p.rhs) + ")";
  }
  return "";
}

std::string print(const StateFormula& f) {
  switch (f.kind) {
    case StateFormula::Kind::prop:
      return "[" + print(*f.prop) + "]";
    case StateFormula::Kind::exists:
      return "E " + print(*f.path);
    case StateFormula::Kind::forall:
      return "A " + print(*f.path);
    case StateFormula::Kind::negation:
      return "!" + print(*f.lhs);
    case StateFormula::Kind::conjunction:
      return "(" + print(*f.lhs) + " && " + print(*f.rhs) + ")";
  }
  return "";
}

std::string print(const PathFormula& f) {
  if (f.kind == PathFormula::Kind::next) return "X " + print(*f.rhs);
  return "(" + print(*f.lhs) + " U " + print(*f.rhs) + ")";
}

}  // namespace qmc
