#include <doctest.h>

#include "qmc/errors.hpp"
#include "qmc/logic.hpp"
#include "qmc/random.hpp"
#include "test_support.hpp"

using namespace qmc;
using namespace qmc::test;

namespace {

using P = Proposition;
using S = StateFormula;

Bindings qubit_bindings() {
  Bindings b;
  b.dim = 2;
  b.bind("zero", Subspace::span(k0()));
  b.bind("one", Subspace::span(k1()));
  b.bind("both", Subspace::full(2));
  b.bind("plus", Subspace::span(kplus()));
  return b;
}

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

PropPtr random_prop(Rng& rng, int depth) {
  static const char* names[] = {"p", "q", "r", "psi3", "a_b"};
  const int c = depth <= 0 ? pick(rng, 0, 2) : pick(rng, 0, 5);
  switch (c) {
    case 0:
    case 1:
      return P::atom(names[pick(rng, 0, 4)]);
    case 2:
      return pick(rng, 0, 1) ? P::truth() : P::falsity();
    case 3:
      return P::not_q(random_prop(rng, depth - 1));
    case 4:
      return P::and_q(random_prop(rng, depth - 1), random_prop(rng, depth - 1));
    default:
      return P::or_q(random_prop(rng, depth - 1), random_prop(rng, depth - 1));
  }
}

StatePtr random_state(Rng& rng, int depth) {
  const int c = depth <= 0 ? 0 : pick(rng, 0, 6);
  switch (c) {
    case 0:
      return S::make_prop(random_prop(rng, 2));
    case 1:
      return S::negation(random_state(rng, depth - 1));
    case 2:
      return S::conjunction(random_state(rng, depth - 1), random_state(rng, depth - 1));
    case 3:
      return S::exists(PathFormula::next(random_state(rng, depth - 1)));
    case 4:
      return S::forall(PathFormula::next(random_state(rng, depth - 1)));
    case 5:
      return S::exists(PathFormula::until(random_state(rng, depth - 1), random_state(rng, depth - 1)));
    default:
      return S::forall(PathFormula::until(random_state(rng, depth - 1), random_state(rng, depth - 1)));
  }
}

}  // namespace

TEST_SUITE("logic") {

TEST_CASE("eval_prop examples") {
  const Bindings b = qubit_bindings();
  CHECK(eval_prop(*P::not_q(P::atom("both")), b).is_zero());
  CHECK(eval_prop(*P::not_q(P::truth()), b).is_zero());
  CHECK(eval_prop(*P::falsity(), b).is_zero());
  CHECK(eval_prop(*P::or_q(P::atom("zero"), P::atom("one")), b).is_full());
  CHECK(same_subspace(eval_prop(*P::and_q(P::atom("both"), P::not_q(P::atom("zero"))), b), Subspace::span(k1())));
  CHECK(eval_prop(*P::and_q(P::atom("plus"), P::atom("zero")), b).is_zero());
  CHECK_THROWS_AS(eval_prop(*P::atom("nope"), b), UnboundAtom);
}

TEST_CASE("bindings check dimensions") {
  Bindings b = qubit_bindings();
  CHECK_THROWS_AS(b.bind("wide", Subspace::full(4)), DimensionMismatch);
  Bindings fresh;
  fresh.bind("wide", Subspace::full(4));
  CHECK(fresh.dim == 4);
}

TEST_CASE("satisfies_atomic examples") {
  const Bindings b = qubit_bindings();
  Rng rng(51);
  CHECK(satisfies_atomic(random_density(2, 2, rng), *P::atom("both"), b));
  CHECK(satisfies_atomic(random_density(2, 2, rng), *P::truth(), b));
  CHECK_FALSE(satisfies_atomic(outer(kplus()), *P::atom("zero"), b));
  CHECK(satisfies_atomic(CMatrix::Identity(2, 2) / 2.0, *P::or_q(P::atom("zero"), P::atom("one")), b));
  CHECK_THROWS_AS(satisfies_atomic(CMatrix::Identity(4, 4) / 4.0, *P::atom("zero"), b), DimensionMismatch);
}

TEST_CASE("non-classicality witness") {
  // |+> satisfies neither span{|0>} nor its orthocomplement.
  const Bindings b = qubit_bindings();
  CHECK_FALSE(satisfies_atomic(outer(kplus()), *P::atom("zero"), b));
  CHECK_FALSE(satisfies_atomic(outer(kplus()), *P::not_q(P::atom("zero")), b));
  // The join of the two is everything, so the disjunction does hold.
  CHECK(satisfies_atomic(outer(kplus()), *P::or_q(P::atom("zero"), P::not_q(P::atom("zero"))), b));
}

TEST_CASE("satisfaction ignores positive scaling") {
  Rng rng(52);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index d = Eigen::Index{1} << (1 + trial % 3);
    Bindings b;
    b.bind("a", random_subspace(d, 1 + trial % d, rng));
    const CMatrix rho = trial % 2 ? random_density(d, 1, rng)
                                  : CMatrix(projector(b.atoms.at("a")) / static_cast<double>(b.atoms.at("a").dim()));
    const bool base = satisfies_atomic(rho, *P::atom("a"), b);
    for (double s : {1e-6, 0.3, 7.0}) CHECK(satisfies_atomic(s * rho, *P::atom("a"), b) == base);
  }
}

TEST_CASE("disjunction is the join and lattice laws hold") {
  Rng rng(53);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index d = 2 + trial % 15;
    Bindings b;
    b.bind("a", random_subspace(d, trial % (d + 1), rng));
    b.bind("b", random_subspace(d, (trial * 7) % (d + 1), rng));
    const Subspace a = b.atoms.at("a"), c = b.atoms.at("b");
    const Subspace disj = eval_prop(*P::or_q(P::atom("a"), P::atom("b")), b);
    CHECK(containment_residual(disj, join(a, c)) < 1e-7);
    CHECK(containment_residual(join(a, c), disj) < 1e-7);
    // De Morgan, with the oracle projector
    const Subspace lhs = eval_prop(*P::not_q(P::and_q(P::atom("a"), P::atom("b"))), b);
    const Subspace rhs = eval_prop(*P::or_q(P::not_q(P::atom("a")), P::not_q(P::atom("b"))), b);
    CHECK(projector_gap(lhs, rhs) < 1e-7);
    CHECK(same_subspace(eval_prop(*P::not_q(P::not_q(P::atom("a"))), b), a));
  }
}

TEST_CASE("parse examples") {
  const StatePtr f = parse_formula("E (true U [psi3])");
  const StatePtr expect =
      S::exists(PathFormula::until(S::make_prop(P::truth()), S::make_prop(P::atom("psi3"))));
  CHECK(equal(*f, *expect));

  const StatePtr g = parse_formula("A X [ ~p & q ]");
  const StatePtr expect_g =
      S::forall(PathFormula::next(S::make_prop(P::and_q(P::not_q(P::atom("p")), P::atom("q")))));
  CHECK(equal(*g, *expect_g));

  CHECK_FALSE(equal(*parse_formula("! [p]"), *parse_formula("[ ~p ]")));
  CHECK(parse_formula("! [p]")->kind == S::Kind::negation);
  CHECK(parse_formula("[ ~p ]")->kind == S::Kind::prop);
}

TEST_CASE("precedence and sugar") {
  // & binds tighter than | inside brackets
  CHECK(equal(*parse_proposition("a | b & c"), *P::or_q(P::atom("a"), P::and_q(P::atom("b"), P::atom("c")))));
  CHECK(equal(*parse_proposition("~a & b"), *P::and_q(P::not_q(P::atom("a")), P::atom("b"))));
  // && binds tighter than ||, which binds tighter than ->
  const auto a = S::make_prop(P::atom("a")), b = S::make_prop(P::atom("b")), c = S::make_prop(P::atom("c"));
  auto or_ = [](StatePtr x, StatePtr y) { return S::negation(S::conjunction(S::negation(x), S::negation(y))); };
  CHECK(equal(*parse_formula("[a] || [b] && [c]"), *or_(a, S::conjunction(b, c))));
  CHECK(equal(*parse_formula("[a] -> [b]"), *S::negation(S::conjunction(a, S::negation(b)))));
  // right associative implication
  CHECK(equal(*parse_formula("[a] -> [b] -> [c]"), *parse_formula("[a] -> ([b] -> [c])")));

  const auto t = S::make_prop(P::truth());
  CHECK(equal(*parse_formula("EF [a]"), *S::exists(PathFormula::until(t, a))));
  CHECK(equal(*parse_formula("A F [a]"), *S::forall(PathFormula::until(t, a))));
  CHECK(equal(*parse_formula("EG [a]"), *S::negation(S::forall(PathFormula::until(t, S::negation(a))))));
  CHECK(equal(*parse_formula("AG [a]"), *S::negation(S::exists(PathFormula::until(t, S::negation(a))))));
  CHECK(equal(*parse_formula("EX [a]"), *parse_formula("E X [a]")));
  CHECK(equal(*parse_formula("true"), *parse_formula("[true]")));
  CHECK(equal(*parse_formula("false"), *parse_formula("[false]")));
}

TEST_CASE("syntax errors carry positions") {
  auto where = [](const char* text) -> SourcePos {
    try {
      parse_formula(text);
    } catch (const SyntaxError& e) {
      return e.pos();
    }
    FAIL("no error for " << text);
    return {};
  };
  CHECK(where("E [p]").column == 3);
  CHECK(where("[p] &&").column == 7);
  CHECK(where("[p & ]").column == 6);
  CHECK(where("A (true U [p]").column == 14);
  CHECK(where("[p]\n  [q]").line == 2);
  CHECK(where("[p] [q]").column == 5);
  CHECK_THROWS_AS(parse_formula(""), SyntaxError);
  CHECK_THROWS_AS(parse_proposition("p &"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("[p] @"), SyntaxError);
}

TEST_CASE("atoms and binding checks") {
  const StatePtr f = parse_formula("E ([q] U [p & ~q]) && AX [r | p]");
  CHECK(atoms(*f) == std::vector<std::string>{"q", "p", "r"});
  Bindings b;
  b.bind("p", Subspace::full(2));
  b.bind("q", Subspace::full(2));
  try {
    require_bound(*f, b);
    FAIL("expected UnboundAtom");
  } catch (const UnboundAtom& e) {
    CHECK(std::string(e.what()).find("'r'") != std::string::npos);
  }
  b.bind("r", Subspace::zero(2));
  CHECK_NOTHROW(require_bound(*f, b));
}

TEST_CASE("printer round trip on random formulas") {
  Rng rng(54);
  for (int trial = 0; trial < 200; ++trial) {
    const StatePtr f = random_state(rng, 1 + trial % 5);
    const std::string text = print(*f);
    CAPTURE(text);
    const StatePtr back = parse_formula(text);
    CHECK(equal(*back, *f));
    CHECK(print(*back) == text);
  }
}

TEST_CASE("printer round trip on propositions") {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const PropPtr p = random_prop(rng, 1 + trial % 4);
    CHECK(equal(*parse_proposition(print(*p)), *p));
  }
}

}  // TEST_SUITE
