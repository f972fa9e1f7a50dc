#pragma once

// Operation descriptions shared by the model format and the circuit IR, and
// the inductive syntax of dynamic circuits: gates, sequencing, and
// measurement-conditioned branching.

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qmc/channel.hpp"

namespace qmc {

/// A named gate from gate_library, or a named noise from noise_library
/// (whose single parameter is its probability).
struct GateOp {
  std::string name;
  std::vector<double> params;
  bool operator==(const GateOp&) const = default;
};

/// Explicit Kraus operators in the local qubit order of the targets.
struct KrausOp {
  std::vector<CMatrix> matrices;
  bool operator==(const KrausOp& other) const;
};

/// One branch {M_m} of a named measurement from measurement_library.
struct MeasureOp {
  std::string name;
  int outcome = 0;
  bool operator==(const MeasureOp&) const = default;
};

struct OpSpec {
  std::variant<GateOp, KrausOp, MeasureOp> op;
  std::vector<int> targets;  // 1-based qubit ids
  bool operator==(const OpSpec&) const = default;
};

/// Local (unembedded) super-operator described by `spec`.
SuperOperator local_operator(const OpSpec& spec);
/// The operator lifted to an n-qubit register.
SuperOperator resolve(const OpSpec& spec, int n_qubits);

struct Circuit;

struct GateNode {
  OpSpec op;  // GateOp or KrausOp; measurements appear only in CondNode
};

struct SeqNode {
  std::vector<Circuit> parts;
};

/// if (measure M[targets] = m -> C_m) fi
struct CondNode {
  std::string measurement;
  std::vector<int> targets;
  std::vector<std::pair<int, Circuit>> branches;
};

struct Circuit {
  std::variant<GateNode, SeqNode, CondNode> node;
};

Circuit gate(const std::string& name, std::vector<int> targets, std::vector<double> params = {});
Circuit kraus(std::vector<CMatrix> matrices, std::vector<int> targets);
Circuit seq(std::vector<Circuit> parts);
Circuit cond(const std::string& measurement, std::vector<int> targets,
             std::vector<std::pair<int, Circuit>> branches);

/// Throws MalformedCircuit for out-of-range or repeated qubits, unknown
/// operations, measurement nodes inside GateNode, or branch maps that do not
/// cover every outcome exactly once.
void validate(const Circuit& c, int n_qubits);

}  // namespace qmc
