#include "qmc/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "qmc/errors.hpp"

namespace qmc {

namespace {

Tolerances g_tolerances;

void require_same_ambient(const Subspace& x, const Subspace& y) {
  if (x.ambient_dim() != y.ambient_dim()) {
    throw DimensionMismatch("subspaces live in spaces of dimension " +
                            std::to_string(x.ambient_dim()) + " and " +
                            std::to_string(y.ambient_dim()));
  }
}

// Left singular vectors above the relative rank cut.
CMatrix column_space(const CMatrix& m) {
  if (m.cols() == 0 || m.rows() == 0) return CMatrix(m.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  if (!(smax > 0.0)) return CMatrix(m.rows(), 0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > tol().eig * smax) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace

const Tolerances& tol() { return g_tolerances; }
void set_tolerances(const Tolerances& t) { g_tolerances = t; }

Subspace::Subspace(Eigen::Index ambient_dim)
    : ambient_dim_(ambient_dim), basis_(ambient_dim, 0) {
  if (ambient_dim < 1) throw DimensionMismatch("ambient dimension must be >= 1");
}

Subspace::Subspace(Eigen::Index ambient_dim, CMatrix orthonormal_basis)
    : ambient_dim_(ambient_dim), basis_(std::move(orthonormal_basis)) {
  if (ambient_dim < 1) throw DimensionMismatch("ambient dimension must be >= 1");
  if (basis_.rows() != ambient_dim || basis_.cols() > ambient_dim) {
    throw DimensionMismatch("basis shape does not fit the ambient dimension");
  }
  if (basis_.cols() > 0) {
    const CMatrix gram = basis_.adjoint() * basis_;
    const double err =
        (gram - CMatrix::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff();
    if (err > tol().ortho) throw Error("subspace basis is not orthonormal");
  }
}

Subspace Subspace::full(Eigen::Index ambient_dim) {
  return Subspace(ambient_dim, CMatrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::span(const CMatrix& vectors) {
  return Subspace(vectors.rows(), column_space(vectors));
}

Subspace Subspace::span(std::span<const CVector> vectors, Eigen::Index ambient_dim) {
  CMatrix m(ambient_dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != ambient_dim) {
      throw DimensionMismatch("vector dimension does not match ambient dimension");
    }
    m.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  return Subspace(ambient_dim, column_space(m));
}

bool is_hermitian(const CMatrix& a, double tolerance) {
  if (a.rows() != a.cols()) return false;
  if (a.size() == 0) return true;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tolerance * scale;
}

Subspace support(const CMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw InvalidDensityMatrix("support requires a non-empty square matrix");
  }
  if (!is_hermitian(rho, tol().herm)) {
    throw InvalidDensityMatrix("support requires a Hermitian matrix");
  }
  const CMatrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  const auto& values = eig.eigenvalues();  // ascending
  const double lmax = values(values.size() - 1);
  if (!(lmax > 0.0)) return Subspace(rho.rows());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) > tol().eig * lmax) keep.push_back(i);
  }
  CMatrix basis(rho.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    basis.col(static_cast<Eigen::Index>(j)) = eig.eigenvectors().col(keep[j]);
  }
  return Subspace(rho.rows(), std::move(basis));
}

Subspace join(std::span<const Subspace> xs) {
  if (xs.empty()) throw DimensionMismatch("join of an empty family has no ambient space");
  const Eigen::Index d = xs.front().ambient_dim();
  Eigen::Index cols = 0;
  for (const auto& x : xs) {
    require_same_ambient(xs.front(), x);
    cols += x.dim();
  }
  CMatrix stacked(d, cols);
  Eigen::Index at = 0;
  for (const auto& x : xs) {
    stacked.middleCols(at, x.dim()) = x.basis();
    at += x.dim();
  }
  return Subspace(d, column_space(stacked));
}

Subspace join(const Subspace& x, const Subspace& y) {
  const Subspace both[] = {x, y};
  return join(both);
}

Subspace orthocomplement(const Subspace& x) {
  const Eigen::Index d = x.ambient_dim();
  if (x.is_zero()) return Subspace::full(d);
  if (x.is_full()) return Subspace(d);
  Eigen::JacobiSVD<CMatrix> svd(x.basis(), Eigen::ComputeFullU);
  return Subspace(d, svd.matrixU().rightCols(d - x.dim()));
}

Subspace intersect(const Subspace& x, const Subspace& y) {
  require_same_ambient(x, y);
  return orthocomplement(join(orthocomplement(x), orthocomplement(y)));
}

bool contains(const Subspace& x, const CVector& v) {
  if (v.size() != x.ambient_dim()) {
    throw DimensionMismatch("vector dimension does not match subspace");
  }
  const double n = v.norm();
  if (n == 0.0) return true;
  const CVector residual = v - x.basis() * (x.basis().adjoint() * v);
  return residual.norm() <= tol().member * n;
}

double containment_residual(const Subspace& x, const Subspace& y) {
  require_same_ambient(x, y);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < y.dim(); ++j) {
    const CVector v = y.basis().col(j);
    const CVector residual = v - x.basis() * (x.basis().adjoint() * v);
    worst = std::max(worst, residual.norm() / v.norm());
  }
  return worst;
}

bool contains(const Subspace& x, const Subspace& y) {
  return containment_residual(x, y) <= tol().member;
}

bool same_subspace(const Subspace& x, const Subspace& y) {
  return x.dim() == y.dim() && contains(x, y) && contains(y, x);
}

CMatrix projector(const Subspace& x) {
  return x.basis() * x.basis().adjoint();
}

std::vector<SchmidtTerm> schmidt(const CVector& phi, Eigen::Index d) {
  if (d < 1 || phi.size() != d * d) {
    throw DimensionMismatch("Schmidt decomposition needs a vector of dimension d^2");
  }
  CMatrix m(d, d);
  for (Eigen::Index l = 0; l < d; ++l)
    for (Eigen::Index r = 0; r < d; ++r) m(l, r) = phi(l * d + r);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  std::vector<SchmidtTerm> terms;
  if (!(s(0) > 0.0)) return terms;
  for (Eigen::Index j = 0; j < s.size() && s(j) > tol().eig * s(0); ++j) {
    terms.push_back({s(j), svd.matrixU().col(j), svd.matrixV().col(j).conjugate()});
  }
  return terms;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix outer(const CVector& v) { return v * v.adjoint(); }

CVector basis_vector(Eigen::Index dim, Eigen::Index index) {
  CVector v = CVector::Zero(dim);
  v(index) = 1.0;
  return v;
}

void require_density_matrix(const CMatrix& rho, bool require_unit_trace) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw InvalidDensityMatrix("density matrix must be square and non-empty");
  }
  if (!is_hermitian(rho, tol().herm)) {
    throw InvalidDensityMatrix("density matrix must be Hermitian");
  }
  const CMatrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (eig.eigenvalues()(0) < -tol().norm * scale) {
    throw InvalidDensityMatrix("density matrix must be positive semidefinite");
  }
  if (require_unit_trace && std::abs(rho.trace() - Complex(1.0)) > tol().norm) {
    throw InvalidDensityMatrix("density matrix must have unit trace");
  }
}

CMatrix partial_trace(const CMatrix& rho, int n_qubits, std::span<const int> keep) {
  if (rho.rows() != (Eigen::Index{1} << n_qubits) || rho.cols() != rho.rows()) {
    throw DimensionMismatch("partial trace: matrix does not match qubit count");
  }
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  std::uint64_t keep_mask = 0;
  for (int q : kept) {
    if (q < 1 || q > n_qubits) throw TargetOutOfRange("partial trace: qubit out of range");
    keep_mask |= std::uint64_t{1} << (q - 1);
  }
  auto compress = [&](std::uint64_t x) {
    Eigen::Index out = 0;
    for (std::size_t j = 0; j < kept.size(); ++j)
      if (x >> (kept[j] - 1) & 1u) out |= Eigen::Index{1} << j;
    return out;
  };
  const Eigen::Index kd = Eigen::Index{1} << kept.size();
  CMatrix out = CMatrix::Zero(kd, kd);
  const std::uint64_t dim = static_cast<std::uint64_t>(rho.rows());
  for (std::uint64_t x = 0; x < dim; ++x)
    for (std::uint64_t y = 0; y < dim; ++y)
      if ((x & ~keep_mask) == (y & ~keep_mask))
        out(compress(x), compress(y)) += rho(static_cast<Eigen::Index>(x),
                                             static_cast<Eigen::Index>(y));
  return out;
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  const CMatrix diff = a - b;
  const CMatrix h = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h, Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

int qubit_count(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw DimensionMismatch("dimension " + std::to_string(dim) + " is not a power of two");
  }
  return n;
}

}  // namespace qmc
