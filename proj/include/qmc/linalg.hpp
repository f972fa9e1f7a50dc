#pragma once

// Dense complex linear algebra and the lattice of closed subspaces.
//
// Basis convention shared by the whole library: in an n-qubit register,
// qubit i (1-based) carries bit weight 2^(i-1) of the computational basis
// index, so qubit 1 is the least significant bit.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qmc {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Numerical tolerances. Defaults are fixed; the CLI may override them once
/// at startup, before any computation runs.
struct Tolerances {
  double eig = 1e-8;      // relative rank cut for eigen/singular values
  double ortho = 1e-9;    // orthonormality of subspace bases
  double member = 1e-7;   // relative residual for subspace membership
  double herm = 1e-9;     // Hermiticity check
  double norm = 1e-9;     // trace / Kraus normalisation
  double recon = 1e-10;   // Schmidt reconstruction
  double prob = 1e-12;    // branches at or below this probability are pruned
  double fp = 1e-7;       // configuration equality on fingerprint collisions
  int fp_decimals = 7;    // rounding used by configuration fingerprints
};

const Tolerances& tol();
void set_tolerances(const Tolerances& t);

/// A closed subspace of C^ambient_dim, stored as a matrix whose k columns
/// are orthonormal. Equality is mutual containment, never basis equality.
class Subspace {
 public:
  /// Zero subspace of the given ambient dimension.
  explicit Subspace(Eigen::Index ambient_dim);
  /// Takes ownership of an orthonormal basis; checks orthonormality.
  Subspace(Eigen::Index ambient_dim, CMatrix orthonormal_basis);

  static Subspace zero(Eigen::Index ambient_dim) { return Subspace(ambient_dim); }
  static Subspace full(Eigen::Index ambient_dim);
  /// Orthonormal basis of the column span of `vectors` (numerical rank).
  static Subspace span(const CMatrix& vectors);
  static Subspace span(std::span<const CVector> vectors, Eigen::Index ambient_dim);

  Eigen::Index ambient_dim() const { return ambient_dim_; }
  Eigen::Index dim() const { return basis_.cols(); }
  bool is_zero() const { return basis_.cols() == 0; }
  bool is_full() const { return basis_.cols() == ambient_dim_; }
  const CMatrix& basis() const { return basis_; }

 private:
  Eigen::Index ambient_dim_;
  CMatrix basis_;
};

/// Support of a Hermitian positive semidefinite matrix.
Subspace support(const CMatrix& rho);

Subspace join(std::span<const Subspace> xs);
Subspace join(const Subspace& x, const Subspace& y);
Subspace orthocomplement(const Subspace& x);
Subspace intersect(const Subspace& x, const Subspace& y);

bool contains(const Subspace& x, const CVector& v);
bool contains(const Subspace& x, const Subspace& y);
/// Mutual containment.
bool same_subspace(const Subspace& x, const Subspace& y);
/// Largest relative residual ||(I - P_x) v|| / ||v|| over the basis columns
/// of `y`; 0 when `y` is the zero subspace.
double containment_residual(const Subspace& x, const Subspace& y);

CMatrix projector(const Subspace& x);

struct SchmidtTerm {
  double coefficient;
  CVector left;
  CVector right;
};

/// Schmidt decomposition of a vector on C^d (x) C^d, where the composite
/// index is left * d + right (Kronecker order).
std::vector<SchmidtTerm> schmidt(const CVector& phi, Eigen::Index d);

// Small helpers used across modules.

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix outer(const CVector& v);
/// Computational basis vector |index> in dimension dim.
CVector basis_vector(Eigen::Index dim, Eigen::Index index);
bool is_hermitian(const CMatrix& a, double tolerance);
/// Throws InvalidDensityMatrix unless `rho` is square, Hermitian and PSD.
void require_density_matrix(const CMatrix& rho, bool require_unit_trace);
/// Reduced state on `keep` (1-based qubit ids, ascending output order).
CMatrix partial_trace(const CMatrix& rho, int n_qubits, std::span<const int> keep);
/// Trace distance 0.5 * ||a - b||_1 for Hermitian arguments.
double trace_distance(const CMatrix& a, const CMatrix& b);
/// Number of qubits n with 2^n == dim; throws DimensionMismatch otherwise.
int qubit_count(Eigen::Index dim);

}  // namespace qmc
