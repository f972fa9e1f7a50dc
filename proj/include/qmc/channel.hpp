#pragma once

// Super-operators in Kraus form, their matrix representation, composition,
// embedding into larger registers, measurements, and the standard gate and
// noise libraries.
//
// Matrix representation: M_E = sum_i E_i (x) conj(E_i) acting on row-major
// vectorisations, vec(A)[r * d + c] = A(r, c). With this convention
//   vec(E(A)) = M_E vec(A)   and   (E(A) (x) I)|Psi> = M_E (A (x) I)|Psi>,
// where |Psi> = sum_k |kk>.
//
// Qubit ordering: a k-qubit operator placed on targets (t_1, ..., t_k) reads
// t_j at bit weight 2^(j-1) of its matrix index. Gate matrices below are
// written in that order; e.g. CNOT with control t_1 and target t_2 is the
// permutation |c t> -> |c, t xor c> on index c + 2t. Listed with the first
// qubit as the most significant bit it is the familiar block-diag(I, X).

#include <string>
#include <utility>
#include <vector>

#include "qmc/linalg.hpp"

namespace qmc {

enum class TraceClass { preserving, reducing };

class SuperOperator {
 public:
  /// Validates sum_i E_i^dag E_i <= I and classifies the channel as trace
  /// preserving when the sum equals I within tolerance.
  SuperOperator(int n_qubits, std::vector<CMatrix> kraus);

  static SuperOperator identity(int n_qubits);
  static SuperOperator unitary(const CMatrix& u);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return Eigen::Index{1} << n_qubits_; }
  const std::vector<CMatrix>& kraus() const { return kraus_; }
  TraceClass trace_class() const { return trace_class_; }
  /// sum_i E_i^dag E_i
  CMatrix kraus_sum() const;

 private:
  int n_qubits_;
  std::vector<CMatrix> kraus_;
  TraceClass trace_class_;
};

struct Measurement {
  int n_qubits = 0;
  std::vector<std::pair<int, CMatrix>> branches;

  /// Throws BadParameter unless sum_m M_m^dag M_m = I.
  void validate() const;
  /// The trace-reducing branch {M_m}. Throws BadParameter for unknown m.
  SuperOperator branch(int outcome) const;
};

struct MeasurementOutcome {
  int outcome;
  double probability;
  CMatrix post_state;
};

CMatrix apply(const SuperOperator& e, const CMatrix& rho);
CMatrix matrix_rep(const SuperOperator& e);

/// `first` followed by `second`: rho -> second(first(rho)). Its matrix
/// representation is M_second * M_first.
SuperOperator compose_sequential(const SuperOperator& first, const SuperOperator& second);

/// `low` on qubits 1..n_low and `high` on the following n_high qubits. The
/// matrix representation satisfies
///   M_{low (x) high} = S (M_high (x) M_low) S^T,   S = parallel_shuffle(n_low, n_high).
SuperOperator compose_parallel(const SuperOperator& low, const SuperOperator& high);

/// Permutation taking the factor order (high_row, high_col, low_row, low_col)
/// of M_high (x) M_low to the order (high_row, low_row, high_col, low_col) of
/// the composite's matrix representation.
CMatrix parallel_shuffle(int n_low, int n_high);

/// Lifts `e` to `total` qubits; targets are 1-based and distinct.
SuperOperator embed(const SuperOperator& e, const std::vector<int>& targets, int total);
Measurement embed(const Measurement& m, const std::vector<int>& targets, int total);
/// Single-matrix version used by embed; exposed for circuit builders.
CMatrix embed_matrix(const CMatrix& k, const std::vector<int>& targets, int total);

/// Outcomes with probability above tol().prob, with normalised post states.
std::vector<MeasurementOutcome> measure(const Measurement& m, const CMatrix& rho);

struct VectorizedPair {
  CVector lhs;  // (E(A) (x) I)|Psi>
  CVector rhs;  // M_E (A (x) I)|Psi>
};
VectorizedPair vectorize_check(const SuperOperator& e, const CMatrix& a);

/// |Psi> = sum_k |kk> on C^d (x) C^d.
CVector maximally_entangled(Eigen::Index d);

// Libraries. Names are case-insensitive.

/// I X Y Z H S SDG T TDG CX (alias CNOT) CZ SWAP CCX, and the rotations
/// RX RY RZ P taking one angle parameter.
CMatrix gate_matrix(const std::string& name, const std::vector<double>& params = {});
SuperOperator gate_library(const std::string& name, const std::vector<double>& params = {});
bool is_known_gate(const std::string& name);

/// bit_flip, phase_flip and bit_phase_flip. `p` is the probability that the
/// qubit is left untouched: N(rho) = p rho + (1 - p) P rho P.
SuperOperator noise_library(const std::string& name, double p);
bool is_known_noise(const std::string& name);

/// "Z": computational basis on k qubits (outcome x = sum_j b_j 2^(j-1)).
/// "X": Hadamard basis on k qubits, outcome bit 0 for |+>.
Measurement measurement_library(const std::string& name, int n_qubits);
bool is_known_measurement(const std::string& name);

}  // namespace qmc
