#pragma once

// Seeded random instances: Haar unitaries, channels, states and subspaces.

#include <cstdint>
#include <random>

#include "qmc/channel.hpp"
#include "qmc/linalg.hpp"

namespace qmc {

using Rng = std::mt19937_64;

/// Entries i.i.d. standard complex Gaussian.
CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng);
CVector random_vector(Eigen::Index dim, Rng& rng);  // unit norm
CMatrix random_unitary(Eigen::Index dim, Rng& rng);
/// Trace-preserving channel with `kraus_count` operators, from a random
/// isometry C^d -> C^(kd).
SuperOperator random_channel(int n_qubits, int kraus_count, Rng& rng);
/// Unit-trace density matrix of the given rank.
CMatrix random_density(Eigen::Index dim, Eigen::Index rank, Rng& rng);
Subspace random_subspace(Eigen::Index dim, Eigen::Index k, Rng& rng);

}  // namespace qmc
