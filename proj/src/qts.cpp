#include "qmc/qts.hpp"

#include <cmath>
#include <deque>
#include <map>

#include "qmc/errors.hpp"

namespace qmc {

QuantumTransitionSystem::QuantumTransitionSystem(int n_qubits, std::vector<std::string> locations,
                                                 std::string initial,
                                                 std::vector<TransitionSpec> transitions)
    : n_qubits_(n_qubits), locations_(std::move(locations)), initial_(-1) {
  if (n_qubits < 1) throw BadParameter("a transition system needs at least one qubit");
  if (locations_.empty()) throw BadParameter("a transition system needs at least one location");
  std::map<std::string, int> index;
  for (std::size_t k = 0; k < locations_.size(); ++k) {
    if (!index.emplace(locations_[k], static_cast<int>(k)).second) {
      throw BadParameter("location '" + locations_[k] + "' declared twice");
    }
  }
  auto lookup = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw UnknownLocation("unknown location '" + name + "'");
    return it->second;
  };
  initial_ = lookup(initial);
  outgoing_.resize(locations_.size());
  for (auto& t : transitions) {
    const int from = lookup(t.from);
    const int to = lookup(t.to);
    SuperOperator op = resolve(t.spec, n_qubits_);
    outgoing_[static_cast<std::size_t>(from)].push_back(static_cast<int>(transitions_.size()));
    transitions_.push_back({from, to, std::move(t.spec), std::move(op)});
  }
  const auto defects =
      normalisation_defects(n_qubits_, static_cast<int>(locations_.size()), transitions_);
  if (!defects.empty()) {
    throw NormalisationViolation(locations_[static_cast<std::size_t>(defects.front().location)],
                                 defects.front().defect, SourcePos{});
  }
}

std::vector<NormalisationDefect> QuantumTransitionSystem::normalisation_defects(
    int n_qubits, int n_locations, const std::vector<Transition>& transitions) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  std::vector<CMatrix> sums(static_cast<std::size_t>(n_locations));
  for (const auto& t : transitions) {
    auto& s = sums[static_cast<std::size_t>(t.from)];
    if (s.size() == 0) s = CMatrix::Zero(d, d);
    s += t.op.kraus_sum();
  }
  std::vector<NormalisationDefect> out;
  for (int l = 0; l < n_locations; ++l) {
    const auto& s = sums[static_cast<std::size_t>(l)];
    if (s.size() == 0) continue;
    const CMatrix defect = CMatrix::Identity(d, d) - s;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (defect + defect.adjoint()),
                                               Eigen::EigenvaluesOnly);
    const double norm = eig.eigenvalues().cwiseAbs().maxCoeff();
    if (norm > tol().norm) out.push_back({l, norm});
  }
  return out;
}

const std::vector<int>& QuantumTransitionSystem::outgoing(int location) const {
  if (location < 0 || location >= static_cast<int>(locations_.size())) {
    throw UnknownLocation("location index " + std::to_string(location) + " out of range");
  }
  return outgoing_[static_cast<std::size_t>(location)];
}

int QuantumTransitionSystem::location_index(const std::string& name) const {
  for (std::size_t k = 0; k < locations_.size(); ++k)
    if (locations_[k] == name) return static_cast<int>(k);
  throw UnknownLocation("unknown location '" + name + "'");
}

bool QuantumTransitionSystem::operator==(const QuantumTransitionSystem& other) const {
  if (n_qubits_ != other.n_qubits_ || locations_ != other.locations_ ||
      initial_ != other.initial_ || transitions_.size() != other.transitions_.size()) {
    return false;
  }
  for (std::size_t k = 0; k < transitions_.size(); ++k) {
    const auto& a = transitions_[k];
    const auto& b = other.transitions_[k];
    if (a.from != b.from || a.to != b.to || !(a.spec == b.spec)) return false;
  }
  return true;
}

std::vector<Successor> step(const QuantumTransitionSystem& sys, const Configuration& config) {
  std::vector<Successor> out;
  for (int t : sys.outgoing(config.location)) {
    const auto& tr = sys.transitions()[static_cast<std::size_t>(t)];
    CMatrix next = qmc::apply(tr.op, config.state);
    const double p = next.trace().real();
    if (p <= tol().prob) continue;
    out.push_back({Configuration{tr.to, next / p, p * config.probability}, p, t});
  }
  return out;
}

namespace {

struct RawTransition {
  int from;
  int to;
  OpSpec spec;
};

class Compiler {
 public:
  explicit Compiler(int n_qubits) : n_qubits_(n_qubits) {}

  int fresh() { return count_++; }
  int count() const { return count_; }
  std::vector<RawTransition>& transitions() { return transitions_; }

  std::vector<int> compile(const Circuit& c, int entry) {
    if (const auto* g = std::get_if<GateNode>(&c.node)) {
      const int next = fresh();
      transitions_.push_back({entry, next, g->op});
      return {next};
    }
    if (const auto* s = std::get_if<SeqNode>(&c.node)) {
      std::vector<int> exits{entry};
      for (const auto& part : s->parts) {
        std::vector<int> next_exits;
        for (int e : exits) {
          auto more = compile(part, e);
          next_exits.insert(next_exits.end(), more.begin(), more.end());
        }
        exits = std::move(next_exits);
      }
      return exits;
    }
    const auto& cn = std::get<CondNode>(c.node);
    std::vector<int> exits;
    for (const auto& [outcome, branch] : cn.branches) {
      const int measured = fresh();
      transitions_.push_back({entry, measured, OpSpec{MeasureOp{cn.measurement, outcome}, cn.targets}});
      auto more = compile(branch, measured);
      exits.insert(exits.end(), more.begin(), more.end());
    }
    return exits;
  }

 private:
  int n_qubits_;
  int count_ = 0;
  std::vector<RawTransition> transitions_;
};

}  // namespace

QuantumTransitionSystem compile(const Circuit& circuit, int n_qubits) {
  validate(circuit, n_qubits);
  Compiler compiler(n_qubits);
  const int root = compiler.fresh();
  for (int exit : compiler.compile(circuit, root)) {
    compiler.transitions().push_back({exit, exit, OpSpec{GateOp{"I", {}}, {1}}});
  }
  auto& raw = compiler.transitions();

  // Breadth-first renumbering from the root, following transitions in
  // creation order.
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(compiler.count()));
  for (std::size_t k = 0; k < raw.size(); ++k) out[static_cast<std::size_t>(raw[k].from)].push_back(k);
  std::vector<int> order(static_cast<std::size_t>(compiler.count()), -1);
  std::vector<int> visit;
  std::deque<int> queue{root};
  order[static_cast<std::size_t>(root)] = 0;
  visit.push_back(root);
  while (!queue.empty()) {
    const int l = queue.front();
    queue.pop_front();
    for (std::size_t k : out[static_cast<std::size_t>(l)]) {
      const int to = raw[k].to;
      if (order[static_cast<std::size_t>(to)] < 0) {
        order[static_cast<std::size_t>(to)] = static_cast<int>(visit.size());
        visit.push_back(to);
        queue.push_back(to);
      }
    }
  }
  auto name = [&](int l) { return "l" + std::to_string(order[static_cast<std::size_t>(l)]); };
  std::vector<std::string> locations;
  for (std::size_t k = 0; k < visit.size(); ++k) locations.push_back("l" + std::to_string(k));
  std::vector<QuantumTransitionSystem::TransitionSpec> specs;
  for (int l : visit)
    for (std::size_t k : out[static_cast<std::size_t>(l)])
      specs.push_back({name(raw[k].from), name(raw[k].to), raw[k].spec});
  return QuantumTransitionSystem(n_qubits, std::move(locations), "l0", std::move(specs));
}

QuantumTransitionSystem build_sequential(const SuperOperator& combinational, int state_qubits,
                                         int memory_qubits) {
  const int n = state_qubits + memory_qubits;
  if (state_qubits < 0 || memory_qubits < 0 || n != combinational.n_qubits()) {
    throw DimensionMismatch("combinational part acts on " +
                            std::to_string(combinational.n_qubits()) + " qubits, expected " +
                            std::to_string(n));
  }
  std::vector<int> targets;
  for (int q = 1; q <= n; ++q) targets.push_back(q);
  return QuantumTransitionSystem(
      n, {"s0"}, "s0", {{"s0", "s0", OpSpec{KrausOp{combinational.kraus()}, targets}}});
}

Circuit teleportation_circuit() {
  return seq({
      gate("CX", {1, 2}),
      gate("H", {1}),
      cond("Z", {2}, {{0, gate("I", {3})}, {1, gate("X", {3})}}),
      cond("Z", {1}, {{0, gate("I", {3})}, {1, gate("Z", {3})}}),
  });
}

QuantumTransitionSystem teleportation_qts() { return compile(teleportation_circuit(), 3); }

CMatrix teleportation_input(const CVector& psi) {
  if (psi.size() != 2) throw DimensionMismatch("teleportation input is a single-qubit state");
  CVector v = CVector::Zero(8);
  const double r = 1.0 / std::sqrt(2.0);
  for (int b = 0; b < 2; ++b) {
    v(b) = r * psi(b);      // qubits 2, 3 in |00>
    v(b + 6) = r * psi(b);  // qubits 2, 3 in |11>
  }
  v /= v.norm();
  return outer(v);
}

}  // namespace qmc
