#include <doctest.h>

#include "qmc/assertion_format.hpp"
#include "qmc/errors.hpp"
#include "qmc/ket.hpp"
#include "test_support.hpp"

using namespace qmc;
using namespace qmc::test;

TEST_SUITE("assertions") {

TEST_CASE("ket literals") {
  CHECK(max_abs(CVector(parse_ket("|0>", 1) - k0())) == 0.0);
  CHECK(max_abs(CVector(parse_ket("|+>", 1) - kplus())) < 1e-15);
  CHECK(max_abs(CVector(parse_ket("|->", 1) - kminus())) < 1e-15);
  CHECK(max_abs(CVector(parse_ket("0.6|0> + 0.8i|1>", 1) - vec({0.6, Complex(0, 0.8)}))) < 1e-15);
  CHECK(max_abs(CVector(parse_ket("-i|1>", 1) - vec({0, Complex(0, -1)}))) == 0.0);

  // The first character is qubit 1, the least significant bit.
  CHECK(max_abs(CVector(parse_ket("|10>", 2) - basis_vector(4, 1))) == 0.0);
  CHECK(max_abs(CVector(parse_ket("|01>", 2) - basis_vector(4, 2))) == 0.0);

  const CVector bell = parse_ket("(|00> + |11>)/sqrt2", 2);
  CHECK(max_abs(CVector(bell - vec({kInvSqrt2, 0, 0, kInvSqrt2}))) < 1e-15);
  CHECK(max_abs(CVector(parse_ket("(|00> + |11>)/sqrt(2)", 2) - bell)) < 1e-15);
  CHECK(max_abs(CVector(parse_ket("1/sqrt 2 (|00> + |11>)", 2) - bell)) < 1e-15);

  // |+0> = |+> on qubit 1, |0> on qubit 2
  CHECK(max_abs(CVector(parse_ket("|+0>", 2) - kron(k0(), kplus()))) < 1e-15);
  CHECK(max_abs(CVector(parse_ket("2 * |1>", 1) - 2.0 * k1())) == 0.0);
}

TEST_CASE("ket errors") {
  auto column = [](const char* text, int n) {
    try {
      parse_ket(text, n);
    } catch (const SyntaxError& e) {
      CHECK(e.pos().line == 1);
      return e.pos().column;
    }
    FAIL("no error for " << text);
    return 0;
  };
  CHECK(column("|0>", 2) == 1);
  CHECK(column("|02>", 2) == 3);
  CHECK(column("0.5", 1) >= 1);
  CHECK(column("|0> +", 1) == 6);
  CHECK(column("(|0>", 1) == 5);
  CHECK(column("|0> |1>", 1) >= 1);  // a product of two vectors
  CHECK_THROWS_AS(parse_state_vector("|0> - |0>", 1), InvalidDensityMatrix);
  CHECK(parse_state_vector("3|0> + 4|1>", 1).norm() == doctest::Approx(1.0));
}

TEST_CASE("assertion files") {
  const AssertionFile file = parse_assertions(read_text(fixture("parse_corpus.ctql")));
  REQUIRE(file.bindings.size() == 3);
  CHECK(file.bindings[0].name == "p");
  CHECK(file.bindings[0].spec.kets.size() == 2);
  CHECK(file.bindings[1].spec.kind == SubspaceSpec::Kind::range);
  CHECK(file.bindings[2].spec.on == std::vector<int>{2});
  CHECK(file.bindings[2].pos.line == 3);
  CHECK(file.bindings[2].pos.column == 1);
  REQUIRE(file.assertions.size() == 3);
  CHECK(file.assertions[0].label == "quantum connectives");
  CHECK(file.assertions[0].pos.line == 5);

  const Bindings b = bind(file, 2);
  CHECK(b.atoms.at("p").dim() == 2);
  CHECK(b.atoms.at("q").dim() == 2);
  CHECK(b.atoms.at("r").dim() == 2);  // span{|1>} on qubit 2, anything on qubit 1
  CHECK(contains(b.atoms.at("r"), basis_vector(4, 2)));
  CHECK(contains(b.atoms.at("r"), basis_vector(4, 3)));
  CHECK_FALSE(contains(b.atoms.at("r"), basis_vector(4, 1)));
}

TEST_CASE("assertion round trips") {
  for (const char* name : {"parse_corpus.ctql", "teleport.ctql", "h_loop.ctql", "repeat_until_success.ctql",
                           "rotation.ctql", "bad/unbound.ctql"}) {
    CAPTURE(name);
    const AssertionFile a = parse_assertions(read_text(fixture(name)));
    const std::string text = serialize_assertions(a);
    const AssertionFile b = parse_assertions(text);
    REQUIRE(a.bindings.size() == b.bindings.size());
    for (std::size_t k = 0; k < a.bindings.size(); ++k) {
      CHECK(a.bindings[k].name == b.bindings[k].name);
      CHECK(a.bindings[k].spec == b.bindings[k].spec);
    }
    REQUIRE(a.assertions.size() == b.assertions.size());
    for (std::size_t k = 0; k < a.assertions.size(); ++k) {
      CHECK(a.assertions[k].label == b.assertions[k].label);
      CHECK(equal(*a.assertions[k].formula, *b.assertions[k].formula));
    }
    CHECK(serialize_assertions(b) == text);
  }
}

TEST_CASE("cylinder atoms") {
  SubspaceSpec spec;
  spec.kets = {"|1>"};
  spec.on = {3};
  const Subspace s = evaluate(spec, 3);
  CHECK(s.dim() == 4);
  for (int x = 0; x < 8; ++x) CHECK(contains(s, basis_vector(8, x)) == ((x & 4) != 0));

  SubspaceSpec two;
  two.kets = {"(|01> + |10>)/sqrt2"};
  two.on = {3, 1};  // local qubit 1 is global 3
  const Subspace t = evaluate(two, 3);
  CHECK(t.dim() == 2);
  CVector v = CVector::Zero(8);
  v(4) = v(1) = kInvSqrt2;  // global qubit 3 set, or global qubit 1 set
  CHECK(contains(t, v));
}

TEST_CASE("assertion errors") {
  auto pos = [](const std::string& text) -> SourcePos {
    try {
      parse_assertions(text);
    } catch (const SyntaxError& e) {
      return e.pos();
    }
    FAIL("no error for " << text);
    return {};
  };
  CHECK(pos("let p = span { |0> }").column == 18);  // the lexer stops at '>'
  CHECK(pos("let true = span { \"|0>\" }").column == 5);
  CHECK(pos("let p = span { \"|0>\" }\nlet p = span { \"|1>\" }").line == 2);
  CHECK(pos("let p = basis { \"|0>\" }").column == 9);
  CHECK(pos("assert \"x\" [p]").column == 12);
  CHECK(pos("assert nolabel : [p]").column == 8);
  CHECK(pos("oops").column == 1);
  CHECK(pos("assert \"x\" : [p] &&").line == 1);

  // binding errors are located at the binding
  const AssertionFile file = parse_assertions("\nlet p = span { \"|00>\" }\n");
  try {
    bind(file, 1);
    FAIL("expected an error");
  } catch (const SyntaxError& e) {
    CHECK(e.pos().line == 2);
    CHECK(std::string(e.what()).find("'p'") != std::string::npos);
  }
  const AssertionFile out_of_range = parse_assertions("let p = span { \"|0>\" } on [4]");
  CHECK_THROWS_AS(bind(out_of_range, 3), SyntaxError);
  const AssertionFile bad_range = parse_assertions("let p = range [[1, 0, 0]]");
  CHECK_THROWS_AS(bind(bad_range, 1), SyntaxError);
}

}  // TEST_SUITE
