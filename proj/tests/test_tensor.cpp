#include <doctest.h>

#include <algorithm>
#include <functional>
#include <iterator>
#include <map>
#include <set>
#include <numeric>

#include "qmc/channel.hpp"
#include "qmc/errors.hpp"
#include "qmc/tensor.hpp"
#include "tensor_oracle.hpp"
#include "test_support.hpp"

using namespace qmc;
using namespace qmc::test;

namespace {

// Largest intermediate rank of a schedule, from index bookkeeping alone.
int plan_width(const TensorNetwork& net, const std::vector<ContractionStep>& plan) {
  std::map<int, std::set<std::string>> live;
  for (std::size_t k = 0; k < net.nodes.size(); ++k)
    live[static_cast<int>(k)] = {net.nodes[k].indices().begin(), net.nodes[k].indices().end()};
  int width = 0;
  for (const auto& s : plan) {
    std::set<std::string> out;
    const auto& a = live[s.lhs];
    const auto& b = live[s.rhs];
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.begin()));
    width = std::max(width, static_cast<int>(out.size()));
    live.erase(s.lhs);
    live.erase(s.rhs);
    live[s.result] = out;
  }
  return width;
}

double tensor_gap(const Tensor& a, const Tensor& b) {
  REQUIRE(a.indices() == b.indices());
  double worst = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
  return worst;
}

}  // namespace

TEST_SUITE("tensor") {

TEST_CASE("tensor construction") {
  CHECK(Tensor().rank() == 0);
  CHECK(Tensor::scalar(2.5).data()[0] == Complex(2.5));
  CHECK_THROWS_AS(Tensor({"a", "a"}, std::vector<Complex>(4)), IndexCollision);
  CHECK_THROWS_AS(Tensor({"a", "b"}, std::vector<Complex>(3)), DimensionMismatch);
  std::vector<std::string> many;
  for (int k = 0; k <= kMaxTensorRank; ++k) many.push_back("i" + std::to_string(k));
  CHECK_THROWS_AS(Tensor(many, {}), RankLimitExceeded);
}

TEST_CASE("bit k of the offset is index k") {
  Tensor t({"a", "b"}, {0, 1, 2, 3});
  CHECK(t.at({1, 0}) == Complex(1));
  CHECK(t.at({0, 1}) == Complex(2));
  const Tensor p = t.permuted({"b", "a"});
  CHECK(p.at({1, 0}) == Complex(2));
  CHECK(t.relabelled("a", "z").indices() == std::vector<std::string>{"z", "b"});
}

TEST_CASE("contract_pair: identity gate relabels") {
  const CVector psi = vec({0.6, Complex(0, 0.8)});
  const Tensor out = contract_pair(matrix_tensor(CMatrix::Identity(2, 2), {"q'"}, {"q"}), vector_tensor(psi, {"q"}));
  CHECK(out.indices() == std::vector<std::string>{"q'"});
  CHECK(max_abs(CVector(tensor_vector(out, {"q'"}) - psi)) < 1e-15);
}

TEST_CASE("contract_pair: Hadamard on |0>") {
  const Tensor out = contract_pair(matrix_tensor(gate_matrix("H"), {"q'"}, {"q"}), vector_tensor(k0(), {"q"}));
  const CVector v = tensor_vector(out, {"q'"});
  CHECK(max_abs(CVector(v - gate_matrix("H") * k0())) < 1e-15);
  CHECK(std::abs(v(0) - kInvSqrt2) < 1e-15);
  CHECK(std::abs(v(1) - kInvSqrt2) < 1e-15);
}

TEST_CASE("contract_pair: CNOT maps |10> to |11>") {
  // |10>: qubit 1 is 1 and qubit 2 is 0, i.e. basis index 1.
  const Tensor c = matrix_tensor(gate_matrix("CX"), {"q1'", "q2'"}, {"q1", "q2"});
  const Tensor out = contract_pair(c, vector_tensor(basis_vector(4, 1), {"q1", "q2"}));
  CHECK(max_abs(CVector(tensor_vector(out, {"q1'", "q2'"}) - basis_vector(4, 3))) < 1e-15);
}

TEST_CASE("contract_pair without shared indices is the outer product") {
  Rng rng(1);
  const Tensor a = random_tensor({"a", "b"}, rng), b = random_tensor({"c"}, rng);
  const Tensor ab = contract_pair(a, b);
  CHECK(ab.indices() == std::vector<std::string>{"a", "b", "c"});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z) CHECK(std::abs(ab.at({x, y, z}) - a.at({x, y}) * b.at({z})) < 1e-15);
}

TEST_CASE("gate tensor contracted with its adjoint is the identity") {
  Rng rng(2);
  const CMatrix u = random_unitary(4, rng);
  const Tensor t = matrix_tensor(u, {"o1", "o2"}, {"i1", "i2"});
  const Tensor tdag = matrix_tensor(u.adjoint(), {"j1", "j2"}, {"o1", "o2"});
  const CMatrix m = tensor_matrix(contract_pair(tdag, t), {"j1", "j2"}, {"i1", "i2"});
  CHECK(max_abs(CMatrix(m - CMatrix::Identity(4, 4))) < 1e-12);
}

TEST_CASE("network validation") {
  TensorNetwork empty;
  CHECK_THROWS_AS(empty.validate(), MalformedNetwork);

  TensorNetwork dangling{{Tensor({"a", "b"}, std::vector<Complex>(4))}, {"a"}};
  CHECK_THROWS_AS(dangling.validate(), MalformedNetwork);
  CHECK_THROWS_AS(contract_network(dangling), MalformedNetwork);

  Tensor t({"x"}, {1, 2});
  TensorNetwork triple{{t, t, t}, {}};
  CHECK_THROWS_AS(triple.validate(), MalformedNetwork);

  TensorNetwork open_twice{{t, t}, {"x"}};
  CHECK_THROWS_AS(open_twice.validate(), MalformedNetwork);
}

TEST_CASE("single-node network is returned unchanged") {
  Rng rng(4);
  const Tensor a = random_tensor({"a", "b", "c"}, rng);
  TensorNetwork net{{a}, {"a", "b", "c"}};
  CHECK(plan_order(net).empty());
  CHECK(tensor_gap(contract_network(net), a) == 0.0);
}

TEST_CASE("H then H on |0> gives |0>") {
  const CVector out = tensor_vector(contract_network(circuit_network(1, k0(), {{gate_matrix("H"), {1}},
                                                                                {gate_matrix("H"), {1}}})),
                                    {wire_name(1, 2)});
  CHECK(max_abs(CVector(out - k0())) < 1e-12);
}

TEST_CASE("wire names") {
  CHECK(wire_name(1, 0) == "q1");
  CHECK(wire_name(3, 2) == "q3''");
}

TEST_CASE("combinational circuit matches dense matrix products") {
  // Z[q1] H[q2] C[q1,q2] Y[q1] H[q2] on |00>.
  const std::vector<PlacedGate> gates{{gate_matrix("Z"), {1}}, {gate_matrix("H"), {2}},
                                      {gate_matrix("CX"), {1, 2}}, {gate_matrix("Y"), {1}},
                                      {gate_matrix("H"), {2}}};
  const TensorNetwork net = circuit_network(2, basis_vector(4, 0), gates);
  const CVector got = tensor_vector(contract_network(net), net.open_indices);

  // Oracle: explicit 4x4 matrices; qubit 1 is the low factor of kron.
  const CMatrix i2 = CMatrix::Identity(2, 2);
  auto on1 = [&](const CMatrix& g) { return kron(i2, g); };
  auto on2 = [&](const CMatrix& g) { return kron(g, i2); };
  CMatrix cx = CMatrix::Zero(4, 4);  // control qubit 1 (bit 0), target qubit 2 (bit 1)
  for (int x = 0; x < 4; ++x) cx((x & 1) ? (x ^ 2) : x, x) = 1;
  const CMatrix total = on2(gate_matrix("H")) * on1(gate_matrix("Y")) * cx * on2(gate_matrix("H")) * on1(gate_matrix("Z"));
  CHECK(max_abs(CVector(got - total * basis_vector(4, 0))) < 1e-10);
}

TEST_CASE("plan_order: two nodes and greedy rule") {
  Rng rng(6);
  TensorNetwork two{{random_tensor({"a", "x"}, rng), random_tensor({"x", "b"}, rng)}, {"a", "b"}};
  const auto plan = plan_order(two);
  REQUIRE(plan.size() == 1);
  CHECK(plan[0] == ContractionStep{0, 1, 2, 2});

  // Chain a-x-y-z-b of ranks 2: contracting neighbours keeps rank 2; the
  // greedy rule picks the lexicographically first such pair.
  TensorNetwork chain{{random_tensor({"a", "x"}, rng), random_tensor({"x", "y"}, rng), random_tensor({"y", "z"}, rng),
                       random_tensor({"z", "b"}, rng)},
                      {"a", "b"}};
  const auto steps = plan_order(chain);
  REQUIRE(steps.size() == 3);
  CHECK(steps[0] == ContractionStep{0, 1, 4, 2});
  for (const auto& s : steps) CHECK(s.result_rank <= 2);
}

TEST_CASE("plan on a gate chain stays within the widest gate") {
  Rng rng(8);
  for (int k = 1; k <= 4; ++k) {
    std::vector<PlacedGate> gates;
    for (int g = 0; g < k; ++g) gates.push_back({random_unitary(4, rng), {1 + g % 2, 2 - g % 2}});
    const TensorNetwork net = circuit_network(2, random_vector(4, rng), gates);
    const auto greedy = plan_order(net);
    const int greedy_width = plan_width(net, greedy);
    CHECK(greedy_width <= 4 + 2);  // widest gate plus the open wires

    // Exhaustive oracle: the best achievable width, and equal results.
    int best = 1 << 20;
    std::vector<ContractionStep> best_plan;
    for (const auto& plan : all_plans(net)) {
      const int w = plan_width(net, plan);
      if (w < best) {
        best = w;
        best_plan = plan;
      }
    }
    CHECK(best <= greedy_width);
    CHECK(tensor_gap(execute_plan(net, greedy), execute_plan(net, best_plan)) < 1e-12);
  }
}

TEST_CASE("every contraction order gives the same tensor") {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    // Up to 5 nodes on a ring with a chord and a few open legs.
    const TensorNetwork net = random_ring_network(2 + trial % 4, rng);
    const Tensor reference = contract_network(net);
    for (const auto& plan : all_plans(net)) CHECK(tensor_gap(execute_plan(net, plan), reference) < 1e-10);
  }
}

TEST_CASE("execute_plan rejects bad schedules") {
  Rng rng(12);
  TensorNetwork net{{random_tensor({"a", "x"}, rng), random_tensor({"x", "b"}, rng)}, {"a", "b"}};
  CHECK_THROWS_AS(execute_plan(net, {}), MalformedNetwork);
  CHECK_THROWS_AS(execute_plan(net, {{0, 0, 2, 0}}), MalformedNetwork);
  CHECK_THROWS_AS(execute_plan(net, {{0, 5, 2, 0}}), MalformedNetwork);
}

}  // TEST_SUITE
