#include "qmc/circuit.hpp"

#include <set>

#include "qmc/errors.hpp"

namespace qmc {

bool KrausOp::operator==(const KrausOp& other) const {
  if (matrices.size() != other.matrices.size()) return false;
  for (std::size_t k = 0; k < matrices.size(); ++k) {
    const auto& a = matrices[k];
    const auto& b = other.matrices[k];
    if (a.rows() != b.rows() || a.cols() != b.cols() || a != b) return false;
  }
  return true;
}

SuperOperator local_operator(const OpSpec& spec) {
  const int k = static_cast<int>(spec.targets.size());
  if (const auto* g = std::get_if<GateOp>(&spec.op)) {
    if (is_known_noise(g->name)) {
      if (g->params.size() != 1) throw BadParameter("noise '" + g->name + "' takes one probability");
      return noise_library(g->name, g->params[0]);
    }
    return gate_library(g->name, g->params);
  }
  if (const auto* kr = std::get_if<KrausOp>(&spec.op)) return SuperOperator(k, kr->matrices);
  const auto& m = std::get<MeasureOp>(spec.op);
  return measurement_library(m.name, k).branch(m.outcome);
}

SuperOperator resolve(const OpSpec& spec, int n_qubits) {
  return embed(local_operator(spec), spec.targets, n_qubits);
}

Circuit gate(const std::string& name, std::vector<int> targets, std::vector<double> params) {
  return Circuit{GateNode{OpSpec{GateOp{name, std::move(params)}, std::move(targets)}}};
}

Circuit kraus(std::vector<CMatrix> matrices, std::vector<int> targets) {
  return Circuit{GateNode{OpSpec{KrausOp{std::move(matrices)}, std::move(targets)}}};
}

Circuit seq(std::vector<Circuit> parts) { return Circuit{SeqNode{std::move(parts)}}; }

Circuit cond(const std::string& measurement, std::vector<int> targets,
             std::vector<std::pair<int, Circuit>> branches) {
  return Circuit{CondNode{measurement, std::move(targets), std::move(branches)}};
}

void validate(const Circuit& c, int n_qubits) {
  if (const auto* g = std::get_if<GateNode>(&c.node)) {
    if (std::holds_alternative<MeasureOp>(g->op.op)) {
      throw MalformedCircuit("measurements must appear as conditional nodes");
    }
    try {
      resolve(g->op, n_qubits);
    } catch (const MalformedCircuit&) {
      throw;
    } catch (const Error& e) {
      throw MalformedCircuit(std::string("invalid gate: ") + e.what());
    }
    return;
  }
  if (const auto* s = std::get_if<SeqNode>(&c.node)) {
    for (const auto& part : s->parts) validate(part, n_qubits);
    return;
  }
  const auto& cn = std::get<CondNode>(c.node);
  Measurement m;
  try {
    m = embed(measurement_library(cn.measurement, static_cast<int>(cn.targets.size())),
              cn.targets, n_qubits);
  } catch (const Error& e) {
    throw MalformedCircuit(std::string("invalid measurement: ") + e.what());
  }
  std::set<int> expected, seen;
  for (const auto& [outcome, op] : m.branches) expected.insert(outcome);
  for (const auto& [outcome, branch] : cn.branches) {
    if (!expected.count(outcome)) {
      throw MalformedCircuit("branch for impossible outcome " + std::to_string(outcome));
    }
    if (!seen.insert(outcome).second) {
      throw MalformedCircuit("outcome " + std::to_string(outcome) + " has two branches");
    }
    validate(branch, n_qubits);
  }
  if (seen != expected) throw MalformedCircuit("conditional does not cover every outcome");
}

}  // namespace qmc
