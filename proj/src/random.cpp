#include "qmc/random.hpp"

#include "qmc/errors.hpp"

namespace qmc {

CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = Complex(n(rng), n(rng));
  return m;
}

CVector random_vector(Eigen::Index dim, Rng& rng) {
  CVector v = ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

namespace {

// Orthonormal columns from QR, with the phases of R's diagonal removed so
// that the result is Haar distributed.
CMatrix isometry(const CMatrix& g) {
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(g.rows(), g.cols());
  const CMatrix r = qr.matrixQR();
  for (Eigen::Index k = 0; k < g.cols(); ++k) {
    const double a = std::abs(r(k, k));
    if (a > 0) q.col(k) *= r(k, k) / a;
  }
  return q;
}

}  // namespace

CMatrix random_unitary(Eigen::Index dim, Rng& rng) { return isometry(ginibre(dim, dim, rng)); }

SuperOperator random_channel(int n_qubits, int kraus_count, Rng& rng) {
  if (kraus_count < 1) throw BadParameter("a channel needs at least one Kraus operator");
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  const CMatrix v = isometry(ginibre(d * kraus_count, d, rng));
  std::vector<CMatrix> kraus;
  for (int k = 0; k < kraus_count; ++k) kraus.push_back(v.middleRows(k * d, d));
  return SuperOperator(n_qubits, std::move(kraus));
}

CMatrix random_density(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
  const CMatrix g = ginibre(dim, rank, rng);
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

Subspace random_subspace(Eigen::Index dim, Eigen::Index k, Rng& rng) {
  if (k == 0) return Subspace(dim);
  return Subspace(dim, isometry(ginibre(dim, k, rng)));
}

}  // namespace qmc
