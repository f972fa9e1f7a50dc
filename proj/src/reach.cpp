#include "qmc/reach.hpp"

#include <string>
#include <vector>

#include "qmc/errors.hpp"
#include "qmc/tensor.hpp"

namespace qmc {

namespace {

void require_state(const QuantumMarkovChain& c, const CMatrix& rho) {
  if (rho.rows() != c.dim() || rho.cols() != c.dim()) {
    throw DimensionMismatch("state dimension does not match the chain");
  }
  require_density_matrix(rho, false);
  if (!(rho.trace().real() > tol().prob)) {
    throw InvalidDensityMatrix("reachability needs a non-zero initial state");
  }
}

std::vector<std::string> names(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int q = 1; q <= n; ++q) out.push_back(prefix + std::to_string(q));
  return out;
}

// Index names of a vector on H (x) H: bit k < n is qubit k+1 of the right
// factor, bit n + k is qubit k+1 of the left factor.
std::vector<std::string> pair_names(const std::string& left, const std::string& right, int n) {
  auto out = names(right, n);
  auto l = names(left, n);
  out.insert(out.end(), l.begin(), l.end());
  return out;
}

// (rho (x) I)|Psi> by contracting rho with the identity tensor |Psi>.
CVector lift_state(const CMatrix& rho, int n) {
  const Eigen::Index d = rho.rows();
  TensorNetwork net;
  net.nodes.push_back(matrix_tensor(rho, names("L", n), names("k", n)));
  net.nodes.push_back(vector_tensor(maximally_entangled(d), pair_names("k", "R", n)));
  net.open_indices = pair_names("L", "R", n);
  return tensor_vector(contract_network(net), net.open_indices);
}

}  // namespace

QuantumMarkovChain::QuantumMarkovChain(SuperOperator channel) : channel_(std::move(channel)) {
  if (channel_.trace_class() != TraceClass::preserving) {
    throw BadParameter("a quantum Markov chain needs a trace-preserving channel");
  }
}

Subspace image(const SuperOperator& e, const Subspace& x) {
  if (x.ambient_dim() != e.dim()) throw DimensionMismatch("subspace does not match the channel");
  if (x.is_zero()) return Subspace(e.dim());
  return support(qmc::apply(e, projector(x)));
}

bool adjacent(const QuantumMarkovChain& c, const CMatrix& rho, const CMatrix& sigma) {
  require_state(c, rho);
  require_state(c, sigma);
  return contains(image(c.channel(), support(rho)), support(sigma));
}

Subspace reachable_subspace(const QuantumMarkovChain& c, const CMatrix& rho) {
  require_state(c, rho);
  const Eigen::Index d = c.dim();
  CMatrix term = rho / rho.trace().real();
  CMatrix sum = term;
  for (Eigen::Index i = 1; i < d; ++i) {
    term = qmc::apply(c.channel(), term);
    term /= term.trace().real();
    sum += term;
    sum /= sum.trace().real();
  }
  return support(sum);
}

Subspace reachable_subspace_vectorized(const QuantumMarkovChain& c, const CMatrix& rho) {
  require_state(c, rho);
  const Eigen::Index d = c.dim();
  const int n = qubit_count(d);
  const CMatrix m = matrix_rep(c.channel());
  CVector v = (n >= kTensorRouteMinQubits) ? lift_state(rho, n)
                                           : CVector(kron(rho, CMatrix::Identity(d, d)) *
                                                     maximally_entangled(d));
  CVector phi = v;
  if (n >= kTensorRouteMinQubits) {
    const auto in = pair_names("L", "R", n);
    const auto out = pair_names("L'", "R'", n);
    const Tensor m_tensor = matrix_tensor(m, out, in);
    for (Eigen::Index i = 1; i < d; ++i) {
      v = tensor_vector(contract_pair(m_tensor, vector_tensor(v, in)), out);
      phi += v;
    }
  } else {
    for (Eigen::Index i = 1; i < d; ++i) {
      v = m * v;
      phi += v;
    }
  }
  const auto terms = schmidt(phi, d);
  CMatrix basis(d, static_cast<Eigen::Index>(terms.size()));
  for (std::size_t j = 0; j < terms.size(); ++j) basis.col(static_cast<Eigen::Index>(j)) = terms[j].left;
  return Subspace(d, std::move(basis));
}

Subspace reachable_fixpoint_oracle(const QuantumMarkovChain& c, const CMatrix& rho) {
  require_state(c, rho);
  Subspace x = support(rho);
  for (Eigen::Index iter = 0; iter <= c.dim(); ++iter) {
    Subspace next = join(x, image(c.channel(), x));
    if (next.dim() == x.dim()) return next;
    x = std::move(next);
  }
  return x;
}

}  // namespace qmc
