#pragma once

// Quantum transition systems: locations joined by super-operator labelled
// transitions, with the per-location normalisation condition
//   sum over outgoing l -E-> l' of sum_k E_k^dag E_k = I.

#include <optional>
#include <string>
#include <vector>

#include "qmc/channel.hpp"
#include "qmc/circuit.hpp"

namespace qmc {

struct Transition {
  int from;
  int to;
  OpSpec spec;
  SuperOperator op;  // spec resolved on the full register
};

struct NormalisationDefect {
  int location;
  double defect;  // spectral norm of I - sum E^dag E
};

class QuantumTransitionSystem {
 public:
  struct TransitionSpec {
    std::string from;
    std::string to;
    OpSpec spec;
  };

  /// Resolves every operation and validates the normalisation condition for
  /// each location that has outgoing transitions.
  QuantumTransitionSystem(int n_qubits, std::vector<std::string> locations,
                          std::string initial, std::vector<TransitionSpec> transitions);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return Eigen::Index{1} << n_qubits_; }
  const std::vector<std::string>& locations() const { return locations_; }
  int initial() const { return initial_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  /// Transition indices leaving `location`, in declaration order.
  const std::vector<int>& outgoing(int location) const;
  int location_index(const std::string& name) const;

  /// Structural equality: qubits, locations, initial location and the
  /// ordered transition list with their operation descriptions.
  bool operator==(const QuantumTransitionSystem& other) const;

  /// Locations whose outgoing operators violate normalisation.
  static std::vector<NormalisationDefect> normalisation_defects(
      int n_qubits, int n_locations, const std::vector<Transition>& transitions);

 private:
  int n_qubits_;
  std::vector<std::string> locations_;
  int initial_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<int>> outgoing_;
};

/// A location paired with a normalised density matrix. `probability` is the
/// product of branch probabilities along the path that produced it.
struct Configuration {
  int location;
  CMatrix state;
  double probability = 1.0;
};

struct Successor {
  Configuration config;
  double branch_probability;  // tr(E(rho)) for the taken transition
  int transition;
};

/// One step of the configuration semantics: every outgoing transition with
/// tr(E(rho)) above tol().prob yields (l', E(rho)/p, p * probability).
std::vector<Successor> step(const QuantumTransitionSystem& sys, const Configuration& config);

/// Compiles a dynamic circuit: gates become a chain, a conditional fans out
/// one measurement-branch transition per outcome, and the remainder of an
/// enclosing sequence is compiled once per branch. Terminal locations get an
/// identity self-loop. Locations are named l0, l1, ... in breadth-first order.
QuantumTransitionSystem compile(const Circuit& circuit, int n_qubits);

/// Single-location system whose self-loop applies `combinational` once per
/// clock cycle to the k state qubits followed by the l memory qubits.
QuantumTransitionSystem build_sequential(const SuperOperator& combinational, int state_qubits,
                                         int memory_qubits);

/// Teleportation of qubit 1 to qubit 3: CX[1,2], H[1], measure qubit 2 and
/// correct with X on qubit 3, measure qubit 1 and correct with Z on qubit 3.
Circuit teleportation_circuit();
QuantumTransitionSystem teleportation_qts();
/// |psi> on qubit 1 with qubits 2 and 3 in (|00> + |11>)/sqrt(2).
CMatrix teleportation_input(const CVector& psi);

}  // namespace qmc
