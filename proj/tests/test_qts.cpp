#include <doctest.h>

#include <algorithm>
#include <deque>
#include <map>

#include "qmc/errors.hpp"
#include "qmc/model_format.hpp"
#include "qmc/qts.hpp"
#include "qmc/random.hpp"
#include "test_support.hpp"

using namespace qmc;
using namespace qmc::test;

namespace {

// Independent normalisation oracle: sum of E^dag E over each location's
// outgoing Kraus operators, compared with I.
double worst_defect(const QuantumTransitionSystem& sys) {
  std::map<int, CMatrix> sums;
  for (const auto& t : sys.transitions()) {
    auto& s = sums.try_emplace(t.from, CMatrix::Zero(sys.dim(), sys.dim())).first->second;
    for (const auto& k : t.op.kraus()) s += k.adjoint() * k;
  }
  double worst = 0.0;
  for (const auto& [loc, s] : sums)
    worst = std::max(worst, max_abs(CMatrix(s - CMatrix::Identity(sys.dim(), sys.dim()))));
  return worst;
}

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<int> distinct_targets(Rng& rng, int n, int k) {
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) all[static_cast<std::size_t>(q)] = q + 1;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(k));
  return all;
}

Circuit random_ir(Rng& rng, int n, int depth) {
  const int choice = depth <= 0 ? pick(rng, 0, 1) : pick(rng, 0, 3);
  if (choice == 0) {
    static const char* one[] = {"H", "X", "Y", "Z", "S", "T"};
    if (n >= 2 && pick(rng, 0, 2) == 0) return gate(pick(rng, 0, 1) ? "CX" : "CZ", distinct_targets(rng, n, 2));
    if (pick(rng, 0, 3) == 0) return gate("bit_flip", distinct_targets(rng, n, 1), {0.25 * pick(rng, 0, 4)});
    return gate(one[pick(rng, 0, 5)], distinct_targets(rng, n, 1));
  }
  if (choice == 1) {
    const int k = pick(rng, 1, std::min(n, 2));
    return kraus(random_channel(k, pick(rng, 1, 3), rng).kraus(), distinct_targets(rng, n, k));
  }
  if (choice == 2) {
    std::vector<Circuit> parts;
    for (int k = pick(rng, 1, 3); k > 0; --k) parts.push_back(random_ir(rng, n, depth - 1));
    return seq(std::move(parts));
  }
  const int k = pick(rng, 1, std::min(n, 2));
  std::vector<std::pair<int, Circuit>> branches;
  for (int m = 0; m < (1 << k); ++m) branches.emplace_back(m, random_ir(rng, n, depth - 1));
  return cond(pick(rng, 0, 1) ? "Z" : "X", distinct_targets(rng, n, k), std::move(branches));
}

}  // namespace

TEST_SUITE("qts") {

TEST_CASE("compile a single gate") {
  const auto sys = compile(gate("H", {1}), 1);
  CHECK(sys.locations().size() == 2);
  REQUIRE(sys.transitions().size() == 2);
  CHECK(sys.transitions()[0].from == 0);
  CHECK(sys.transitions()[0].to == 1);
  CHECK(std::get<GateOp>(sys.transitions()[0].spec.op).name == "H");
  // terminal identity self-loop
  CHECK(sys.transitions()[1].from == 1);
  CHECK(sys.transitions()[1].to == 1);
  CHECK(max_abs(CMatrix(matrix_rep(sys.transitions()[1].op) - CMatrix::Identity(4, 4))) < 1e-15);
}

TEST_CASE("compile a combinational circuit into a chain") {
  const Circuit c = seq({gate("Z", {1}), gate("H", {2}), gate("CX", {1, 2}), gate("Y", {1}), gate("H", {2})});
  const auto sys = compile(c, 2);
  CHECK(sys.locations().size() == 6);
  REQUIRE(sys.transitions().size() == 6);
  for (int k = 0; k < 5; ++k) {
    CHECK(sys.transitions()[static_cast<std::size_t>(k)].from == k);
    CHECK(sys.transitions()[static_cast<std::size_t>(k)].to == k + 1);
  }
}

TEST_CASE("teleportation compiles to the fifteen-location system") {
  const auto sys = teleportation_qts();
  CHECK(sys.n_qubits() == 3);
  CHECK(sys.locations().size() == 15);
  CHECK(sys.locations().front() == "l0");
  CHECK(sys.locations().back() == "l14");
  CHECK(sys.transitions().size() == 18);
  // Two measurement fan-outs on qubit 2, then four on qubit 1.
  int on2 = 0, on1 = 0;
  for (const auto& t : sys.transitions())
    if (std::holds_alternative<MeasureOp>(t.spec.op)) (t.spec.targets == std::vector<int>{2} ? on2 : on1)++;
  CHECK(on2 == 2);
  CHECK(on1 == 4);
  CHECK(sys.outgoing(2).size() == 2);
  for (int term = 11; term <= 14; ++term) {
    REQUIRE(sys.outgoing(term).size() == 1);
    CHECK(sys.transitions()[static_cast<std::size_t>(sys.outgoing(term)[0])].to == term);
  }
  // The shipped fixture is exactly this system.
  CHECK(parse_model(read_text(fixture("teleport.qts"))) == sys);
}

TEST_CASE("malformed circuits") {
  CHECK_THROWS_AS(compile(gate("H", {3}), 2), MalformedCircuit);
  CHECK_THROWS_AS(compile(gate("CX", {1, 1}), 2), MalformedCircuit);
  CHECK_THROWS_AS(compile(gate("FOO", {1}), 2), MalformedCircuit);
  CHECK_THROWS_AS(compile(cond("Z", {1}, {{0, gate("X", {1})}}), 1), MalformedCircuit);
  CHECK_THROWS_AS(compile(cond("Z", {1}, {{0, gate("X", {1})}, {0, gate("X", {1})}}), 1), MalformedCircuit);
  CHECK_THROWS_AS(compile(cond("Z", {1}, {{0, gate("X", {1})}, {2, gate("X", {1})}}), 1), MalformedCircuit);
  CHECK_THROWS_AS(compile(Circuit{GateNode{OpSpec{MeasureOp{"Z", 0}, {1}}}}, 1), MalformedCircuit);
  CHECK_THROWS_AS(compile(kraus({2.0 * CMatrix::Identity(2, 2)}, {1}), 1), MalformedCircuit);
}

TEST_CASE("compiled random circuits satisfy normalisation") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4;
    const Circuit c = random_ir(rng, n, 1 + trial % 6);
    const auto sys = compile(c, n);
    CHECK(worst_defect(sys) < 1e-9);
    CHECK(QuantumTransitionSystem::normalisation_defects(n, static_cast<int>(sys.locations().size()),
                                                         sys.transitions())
              .empty());
    // Every location has somewhere to go.
    for (int l = 0; l < static_cast<int>(sys.locations().size()); ++l) CHECK_FALSE(sys.outgoing(l).empty());
  }
}

TEST_CASE("system construction validates its parts") {
  const OpSpec h{GateOp{"H", {}}, {1}};
  CHECK_THROWS_AS(QuantumTransitionSystem(1, {"a"}, "b", {{"a", "a", h}}), UnknownLocation);
  CHECK_THROWS_AS(QuantumTransitionSystem(1, {"a"}, "a", {{"a", "c", h}}), UnknownLocation);
  CHECK_THROWS_AS(QuantumTransitionSystem(1, {"a", "b"}, "a", {{"a", "a", h}, {"a", "b", h}}),
                  NormalisationViolation);
  // A location without outgoing transitions is allowed.
  CHECK_NOTHROW(QuantumTransitionSystem(1, {"a", "b"}, "a", {{"a", "b", h}}));
}

TEST_CASE("build_sequential") {
  const auto id = build_sequential(SuperOperator::identity(2), 1, 1);
  CHECK(id.locations().size() == 1);
  REQUIRE(id.transitions().size() == 1);
  CHECK(id.transitions()[0].from == 0);
  CHECK(id.transitions()[0].to == 0);
  CHECK(max_abs(CMatrix(matrix_rep(id.transitions()[0].op) - CMatrix::Identity(16, 16))) < 1e-15);

  // X each cycle: |0><0| -> |1><1| -> |0><0|.
  const auto flip = build_sequential(gate_library("X"), 1, 0);
  Configuration c{0, outer(k0()), 1.0};
  auto s1 = step(flip, c);
  REQUIRE(s1.size() == 1);
  CHECK(max_abs(CMatrix(s1[0].config.state - outer(k1()))) < 1e-15);
  auto s2 = step(flip, s1[0].config);
  CHECK(max_abs(CMatrix(s2[0].config.state - outer(k0()))) < 1e-15);

  const auto noisy = build_sequential(noise_library("bit_flip", 0.5), 0, 1);
  auto s = step(noisy, Configuration{0, outer(k0()), 1.0});
  REQUIRE(s.size() == 1);
  CHECK(max_abs(CMatrix(s[0].config.state - CMatrix::Identity(2, 2) / 2.0)) < 1e-15);

  CHECK_THROWS_AS(build_sequential(SuperOperator::identity(2), 1, 2), DimensionMismatch);
}

TEST_CASE("step examples") {
  const auto loop = build_sequential(SuperOperator::identity(1), 1, 0);
  auto same = step(loop, Configuration{0, outer(kplus()), 0.5});
  REQUIRE(same.size() == 1);
  CHECK(same[0].branch_probability == doctest::Approx(1.0));
  CHECK(same[0].config.probability == doctest::Approx(0.5));
  CHECK(max_abs(CMatrix(same[0].config.state - outer(kplus()))) < 1e-15);

  // Teleportation from |+>: l2 fans out with probability 1/2 each.
  const auto sys = teleportation_qts();
  Configuration c{0, teleportation_input(kplus()), 1.0};
  for (int k = 0; k < 2; ++k) {
    auto next = step(sys, c);
    REQUIRE(next.size() == 1);
    CHECK(next[0].branch_probability == doctest::Approx(1.0));
    c = next[0].config;
  }
  CHECK(c.location == 2);
  auto fan = step(sys, c);
  REQUIRE(fan.size() == 2);
  for (const auto& s : fan) {
    CHECK(std::abs(s.branch_probability - 0.5) < 1e-12);
    CHECK(std::abs(s.config.state.trace() - 1.0) < 1e-12);
  }

  CHECK_THROWS_AS(step(sys, Configuration{15, outer(basis_vector(8, 0)), 1.0}), UnknownLocation);
  CHECK_THROWS_AS(step(sys, Configuration{-1, outer(basis_vector(8, 0)), 1.0}), UnknownLocation);
}

TEST_CASE("zero-probability branches are pruned") {
  const auto sys = compile(cond("Z", {1}, {{0, gate("I", {1})}, {1, gate("X", {1})}}), 1);
  auto next = step(sys, Configuration{0, outer(k1()), 1.0});
  REQUIRE(next.size() == 1);
  CHECK(std::get<MeasureOp>(sys.transitions()[static_cast<std::size_t>(next[0].transition)].spec.op).outcome == 1);
}

TEST_CASE("step conserves probability mass") {
  Rng rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 3;
    const auto sys = compile(random_ir(rng, n, 3), n);
    Configuration c{0, random_density(sys.dim(), 1 + trial % 2, rng), 0.8};
    for (int depth = 0; depth < 4; ++depth) {
      auto next = step(sys, c);
      REQUIRE_FALSE(next.empty());
      double total = 0.0;
      for (const auto& s : next) total += s.config.probability;
      CHECK(std::abs(total - c.probability) < 1e-9);
      c = next[static_cast<std::size_t>(depth) % next.size()].config;
    }
  }
}

TEST_CASE("teleportation moves the input to qubit 3") {
  Rng rng(23);
  const auto sys = teleportation_qts();
  for (int trial = 0; trial < 20; ++trial) {
    const CVector psi = random_vector(2, rng);
    std::deque<Configuration> open{{0, teleportation_input(psi), 1.0}};
    std::vector<Configuration> done;
    while (!open.empty()) {
      Configuration c = open.front();
      open.pop_front();
      if (c.location >= 11) {
        done.push_back(c);
        continue;
      }
      for (auto& s : step(sys, c)) open.push_back(s.config);
    }
    REQUIRE(done.size() == 4);
    const std::vector<int> keep{3};
    for (const auto& c : done) {
      CHECK(std::abs(c.probability - 0.25) < 1e-9);
      CHECK(trace_distance(partial_trace(c.state, 3, keep), outer(psi)) < 1e-9);
    }
  }
}

TEST_CASE("teleportation input validation") {
  CHECK_THROWS_AS(teleportation_input(basis_vector(4, 0)), DimensionMismatch);
  CHECK(std::abs(teleportation_input(k1()).trace() - 1.0) < 1e-15);
}

}  // TEST_SUITE
