#pragma once

// Reachability in quantum Markov chains <H, E>.

#include "qmc/channel.hpp"
#include "qmc/linalg.hpp"

namespace qmc {

class QuantumMarkovChain {
 public:
  /// Requires a trace-preserving channel.
  explicit QuantumMarkovChain(SuperOperator channel);

  Eigen::Index dim() const { return channel_.dim(); }
  const SuperOperator& channel() const { return channel_; }

 private:
  SuperOperator channel_;
};

/// E(X) = join over |psi> in X of supp(E(|psi><psi|)), computed as
/// supp(E(P_X)).
Subspace image(const SuperOperator& e, const Subspace& x);

/// rho -> sigma iff supp(sigma) is contained in E(supp(rho)).
bool adjacent(const QuantumMarkovChain& c, const CMatrix& rho, const CMatrix& sigma);

/// supp(sum_{i<d} E^i(rho)), renormalising the running sum each step.
Subspace reachable_subspace(const QuantumMarkovChain& c, const CMatrix& rho);

/// Accumulates |Phi> = sum_{i<d} M_E^i (rho (x) I)|Psi> and returns the span
/// of its left Schmidt vectors. Registers of three or more qubits apply M_E
/// by tensor contraction; smaller ones use dense matrix-vector products.
Subspace reachable_subspace_vectorized(const QuantumMarkovChain& c, const CMatrix& rho);

/// Least fixed point of X -> supp(rho) v E(X), iterated from supp(rho).
Subspace reachable_fixpoint_oracle(const QuantumMarkovChain& c, const CMatrix& rho);

inline constexpr int kTensorRouteMinQubits = 3;

}  // namespace qmc
