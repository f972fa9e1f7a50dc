#pragma once

// Tensors over named binary indices and tensor-network contraction.
//
// A tensor with indices (i_0, ..., i_{r-1}) stores 2^r amplitudes; bit b_k of
// the flat offset is the value of index i_k. A rank-0 tensor is a scalar.

#include <string>
#include <vector>

#include "qmc/linalg.hpp"

namespace qmc {

inline constexpr int kMaxTensorRank = 26;

class Tensor {
 public:
  /// Rank-0 tensor holding 1.
  Tensor();
  Tensor(std::vector<std::string> indices, std::vector<Complex> data);

  static Tensor scalar(Complex value);

  int rank() const { return static_cast<int>(indices_.size()); }
  const std::vector<std::string>& indices() const { return indices_; }
  const std::vector<Complex>& data() const { return data_; }
  /// Position of `name` in indices(), or -1.
  int position(const std::string& name) const;

  /// Entry for an assignment given in the order of indices().
  Complex at(const std::vector<int>& bits) const;

  Tensor relabelled(const std::string& from, const std::string& to) const;
  /// Same tensor with its indices reordered to `order` (a permutation of
  /// indices()).
  Tensor permuted(const std::vector<std::string>& order) const;

 private:
  std::vector<std::string> indices_;
  std::vector<Complex> data_;
};

/// Sums over every index name the two tensors share. The result carries the
/// unshared indices of `a` followed by those of `b`.
Tensor contract_pair(const Tensor& a, const Tensor& b);

struct TensorNetwork {
  std::vector<Tensor> nodes;
  /// Indices left uncontracted, in the order the result should carry them.
  std::vector<std::string> open_indices;

  /// Throws MalformedNetwork unless every non-open index joins exactly two
  /// nodes and every open index appears on exactly one.
  void validate() const;
};

/// One pairwise contraction. Nodes of the network have ids 0..m-1; the k-th
/// step produces node id m + k.
struct ContractionStep {
  int lhs;
  int rhs;
  int result;
  int result_rank;

  bool operator==(const ContractionStep&) const = default;
};

/// Greedy schedule: repeatedly contract the live pair whose intermediate
/// tensor is smallest, ties broken by the lexicographically smallest
/// (lhs, rhs) id pair.
std::vector<ContractionStep> plan_order(const TensorNetwork& net);

/// Runs an explicit schedule; the result carries net.open_indices in order.
Tensor execute_plan(const TensorNetwork& net, const std::vector<ContractionStep>& plan);

Tensor contract_network(const TensorNetwork& net);

// Bridges between matrices/vectors and tensors.

/// Tensor of a vector on the named qubits; names[k] is the qubit at bit
/// weight 2^k of the vector index.
Tensor vector_tensor(const CVector& v, const std::vector<std::string>& names);
/// T(rows = x, cols = y) = m(x, y). For a gate U mapping wires `in` to `out`
/// use matrix_tensor(U, out, in).
Tensor matrix_tensor(const CMatrix& m, const std::vector<std::string>& row_names,
                     const std::vector<std::string>& col_names);
CVector tensor_vector(const Tensor& t, const std::vector<std::string>& names);
CMatrix tensor_matrix(const Tensor& t, const std::vector<std::string>& row_names,
                      const std::vector<std::string>& col_names);

/// A k-qubit matrix placed on 1-based qubit ids; targets[j] is the qubit at
/// local bit weight 2^j of the matrix.
struct PlacedGate {
  CMatrix matrix;
  std::vector<int> targets;
};

/// Wire name of qubit q after `layer` gates have touched it: "q1", "q1'", ...
std::string wire_name(int qubit, int layer);

/// Network for applying `gates` in order to `input` on n qubits. Open
/// indices are the final wire of each qubit, in qubit order.
TensorNetwork circuit_network(int n_qubits, const CVector& input,
                              const std::vector<PlacedGate>& gates);

}  // namespace qmc
