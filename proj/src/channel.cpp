#include "qmc/channel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "qmc/errors.hpp"

namespace qmc {

namespace {

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// Permutation matrix sending basis index x to perm(x).
template <typename F>
CMatrix permutation_matrix(Eigen::Index dim, F perm) {
  CMatrix m = CMatrix::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) m(perm(x), x) = 1.0;
  return m;
}

void require_square(const CMatrix& rho, Eigen::Index dim) {
  if (rho.rows() != dim || rho.cols() != dim) {
    throw DimensionMismatch("expected a " + std::to_string(dim) + "x" + std::to_string(dim) +
                            " matrix, got " + std::to_string(rho.rows()) + "x" +
                            std::to_string(rho.cols()));
  }
}

void check_targets(const std::vector<int>& targets, int total) {
  std::set<int> seen;
  for (int q : targets) {
    if (q < 1 || q > total) {
      throw TargetOutOfRange("qubit " + std::to_string(q) + " outside 1.." + std::to_string(total));
    }
    if (!seen.insert(q).second) throw RepeatedQubit("qubit " + std::to_string(q) + " repeated");
  }
}

}  // namespace

SuperOperator::SuperOperator(int n_qubits, std::vector<CMatrix> kraus)
    : n_qubits_(n_qubits), kraus_(std::move(kraus)), trace_class_(TraceClass::preserving) {
  if (n_qubits < 0) throw BadParameter("qubit count must be non-negative");
  if (kraus_.empty()) throw BadParameter("a super-operator needs at least one Kraus operator");
  for (const auto& k : kraus_) require_square(k, dim());
  const CMatrix defect = CMatrix::Identity(dim(), dim()) - kraus_sum();
  if (defect.cwiseAbs().maxCoeff() <= tol().norm) return;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (defect + defect.adjoint()),
                                             Eigen::EigenvaluesOnly);
  if (eig.eigenvalues()(0) < -tol().norm) {
    throw BadParameter("Kraus operators are trace increasing (sum E^dag E exceeds I)");
  }
  trace_class_ = TraceClass::reducing;
}

SuperOperator SuperOperator::identity(int n_qubits) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  return SuperOperator(n_qubits, {CMatrix::Identity(d, d)});
}

SuperOperator SuperOperator::unitary(const CMatrix& u) {
  return SuperOperator(qubit_count(u.rows()), {u});
}

CMatrix SuperOperator::kraus_sum() const {
  CMatrix sum = CMatrix::Zero(dim(), dim());
  for (const auto& k : kraus_) sum += k.adjoint() * k;
  return sum;
}

void Measurement::validate() const {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  if (branches.empty()) throw BadParameter("measurement has no branches");
  CMatrix sum = CMatrix::Zero(d, d);
  std::set<int> outcomes;
  for (const auto& [m, op] : branches) {
    if (!outcomes.insert(m).second) throw BadParameter("duplicate measurement outcome");
    require_square(op, d);
    sum += op.adjoint() * op;
  }
  if ((sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol().norm) {
    throw BadParameter("measurement operators do not satisfy sum M^dag M = I");
  }
}

SuperOperator Measurement::branch(int outcome) const {
  for (const auto& [m, op] : branches)
    if (m == outcome) return SuperOperator(n_qubits, {op});
  throw BadParameter("measurement has no outcome " + std::to_string(outcome));
}

CMatrix apply(const SuperOperator& e, const CMatrix& rho) {
  require_square(rho, e.dim());
  CMatrix out = CMatrix::Zero(e.dim(), e.dim());
  for (const auto& k : e.kraus()) out.noalias() += k * rho * k.adjoint();
  return out;
}

CMatrix matrix_rep(const SuperOperator& e) {
  const Eigen::Index d2 = e.dim() * e.dim();
  CMatrix m = CMatrix::Zero(d2, d2);
  for (const auto& k : e.kraus()) m += kron(k, k.conjugate());
  return m;
}

SuperOperator compose_sequential(const SuperOperator& first, const SuperOperator& second) {
  if (first.n_qubits() != second.n_qubits()) {
    throw DimensionMismatch("sequential composition needs equal qubit counts");
  }
  std::vector<CMatrix> kraus;
  kraus.reserve(first.kraus().size() * second.kraus().size());
  for (const auto& f : second.kraus())
    for (const auto& e : first.kraus()) kraus.push_back(f * e);
  return SuperOperator(first.n_qubits(), std::move(kraus));
}

SuperOperator compose_parallel(const SuperOperator& low, const SuperOperator& high) {
  std::vector<CMatrix> kraus;
  kraus.reserve(low.kraus().size() * high.kraus().size());
  for (const auto& h : high.kraus())
    for (const auto& l : low.kraus()) kraus.push_back(kron(h, l));
  return SuperOperator(low.n_qubits() + high.n_qubits(), std::move(kraus));
}

CMatrix parallel_shuffle(int n_low, int n_high) {
  const Eigen::Index dl = Eigen::Index{1} << n_low;
  const Eigen::Index dh = Eigen::Index{1} << n_high;
  // Source digits (hr, hc, lr, lc) with radices (dh, dh, dl, dl).
  return permutation_matrix(dh * dh * dl * dl, [&](Eigen::Index x) {
    const Eigen::Index lc = x % dl;
    const Eigen::Index lr = (x / dl) % dl;
    const Eigen::Index hc = (x / (dl * dl)) % dh;
    const Eigen::Index hr = x / (dl * dl * dh);
    return ((hr * dl + lr) * dh + hc) * dl + lc;
  });
}

CMatrix embed_matrix(const CMatrix& k, const std::vector<int>& targets, int total) {
  check_targets(targets, total);
  const Eigen::Index local_dim = Eigen::Index{1} << targets.size();
  require_square(k, local_dim);
  std::uint64_t mask = 0;
  for (int q : targets) mask |= std::uint64_t{1} << (q - 1);
  auto local_of = [&](std::uint64_t x) {
    Eigen::Index l = 0;
    for (std::size_t j = 0; j < targets.size(); ++j)
      if (x >> (targets[j] - 1) & 1u) l |= Eigen::Index{1} << j;
    return l;
  };
  auto global_of = [&](std::uint64_t rest, Eigen::Index l) {
    std::uint64_t x = rest & ~mask;
    for (std::size_t j = 0; j < targets.size(); ++j)
      if (l >> j & 1) x |= std::uint64_t{1} << (targets[j] - 1);
    return static_cast<Eigen::Index>(x);
  };
  const Eigen::Index d = Eigen::Index{1} << total;
  CMatrix full = CMatrix::Zero(d, d);
  for (Eigen::Index x = 0; x < d; ++x) {
    const auto ux = static_cast<std::uint64_t>(x);
    const Eigen::Index lx = local_of(ux);
    for (Eigen::Index lc = 0; lc < local_dim; ++lc) full(x, global_of(ux, lc)) = k(lx, lc);
  }
  return full;
}

SuperOperator embed(const SuperOperator& e, const std::vector<int>& targets, int total) {
  if (static_cast<int>(targets.size()) != e.n_qubits()) {
    throw DimensionMismatch("embed: " + std::to_string(targets.size()) + " targets for a " +
                            std::to_string(e.n_qubits()) + "-qubit operator");
  }
  std::vector<CMatrix> kraus;
  for (const auto& k : e.kraus()) kraus.push_back(embed_matrix(k, targets, total));
  return SuperOperator(total, std::move(kraus));
}

Measurement embed(const Measurement& m, const std::vector<int>& targets, int total) {
  if (static_cast<int>(targets.size()) != m.n_qubits) {
    throw DimensionMismatch("embed: target count does not match measurement");
  }
  Measurement out{total, {}};
  for (const auto& [outcome, op] : m.branches)
    out.branches.emplace_back(outcome, embed_matrix(op, targets, total));
  return out;
}

std::vector<MeasurementOutcome> measure(const Measurement& m, const CMatrix& rho) {
  require_density_matrix(rho, true);
  require_square(rho, Eigen::Index{1} << m.n_qubits);
  std::vector<MeasurementOutcome> out;
  for (const auto& [outcome, op] : m.branches) {
    CMatrix post = op * rho * op.adjoint();
    const double p = post.trace().real();
    if (p <= tol().prob) continue;
    out.push_back({outcome, p, post / p});
  }
  return out;
}

CVector maximally_entangled(Eigen::Index d) {
  CVector psi = CVector::Zero(d * d);
  for (Eigen::Index k = 0; k < d; ++k) psi(k * d + k) = 1.0;
  return psi;
}

VectorizedPair vectorize_check(const SuperOperator& e, const CMatrix& a) {
  require_square(a, e.dim());
  const Eigen::Index d = e.dim();
  const CMatrix id = CMatrix::Identity(d, d);
  const CVector psi = maximally_entangled(d);
  return {kron(qmc::apply(e, a), id) * psi, matrix_rep(e) * (kron(a, id) * psi)};
}

CMatrix gate_matrix(const std::string& raw_name, const std::vector<double>& params) {
  const std::string name = upper(raw_name);
  const Complex i(0.0, 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  auto no_params = [&] {
    if (!params.empty()) throw BadParameter("gate " + name + " takes no parameters");
  };
  auto angle = [&] {
    if (params.size() != 1) throw BadParameter("gate " + name + " takes exactly one angle");
    if (!std::isfinite(params[0])) throw BadParameter("gate angle must be finite");
    return params[0];
  };
  if (name == "I") return no_params(), mat2(1, 0, 0, 1);
  if (name == "X") return no_params(), mat2(0, 1, 1, 0);
  if (name == "Y") return no_params(), mat2(0, -i, i, 0);
  if (name == "Z") return no_params(), mat2(1, 0, 0, -1);
  if (name == "H") return no_params(), mat2(r, r, r, -r);
  if (name == "S") return no_params(), mat2(1, 0, 0, i);
  if (name == "SDG") return no_params(), mat2(1, 0, 0, -i);
  if (name == "T") return no_params(), mat2(1, 0, 0, std::exp(i * (M_PI / 4)));
  if (name == "TDG") return no_params(), mat2(1, 0, 0, std::exp(-i * (M_PI / 4)));
  if (name == "RX") {
    const double t = angle() / 2;
    return mat2(std::cos(t), -i * std::sin(t), -i * std::sin(t), std::cos(t));
  }
  if (name == "RY") {
    const double t = angle() / 2;
    return mat2(std::cos(t), -std::sin(t), std::sin(t), std::cos(t));
  }
  if (name == "RZ") {
    const double t = angle() / 2;
    return mat2(std::exp(-i * t), 0, 0, std::exp(i * t));
  }
  if (name == "P") return mat2(1, 0, 0, std::exp(i * angle()));
  if (name == "CX" || name == "CNOT") {
    no_params();
    return permutation_matrix(4, [](Eigen::Index x) { return (x & 1) ? x ^ 2 : x; });
  }
  if (name == "CZ") {
    no_params();
    CMatrix m = CMatrix::Identity(4, 4);
    m(3, 3) = -1.0;
    return m;
  }
  if (name == "SWAP") {
    no_params();
    return permutation_matrix(4, [](Eigen::Index x) { return ((x & 1) << 1) | (x >> 1); });
  }
  if (name == "CCX" || name == "TOFFOLI") {
    no_params();
    return permutation_matrix(8, [](Eigen::Index x) { return (x & 3) == 3 ? x ^ 4 : x; });
  }
  throw UnknownGate("unknown gate '" + raw_name + "'");
}

bool is_known_gate(const std::string& name) {
  static const std::set<std::string> known = {"I",  "X",    "Y",  "Z",   "H",    "S",
                                              "SDG", "T",   "TDG", "RX", "RY",   "RZ",
                                              "P",  "CX",   "CNOT", "CZ", "SWAP", "CCX",
                                              "TOFFOLI"};
  return known.count(upper(name)) > 0;
}

SuperOperator gate_library(const std::string& name, const std::vector<double>& params) {
  return SuperOperator::unitary(gate_matrix(name, params));
}

SuperOperator noise_library(const std::string& raw_name, double p) {
  const std::string name = lower(raw_name);
  if (!is_known_noise(name)) throw UnknownGate("unknown noise '" + raw_name + "'");
  if (!(p >= 0.0 && p <= 1.0)) throw BadParameter("noise probability must lie in [0, 1]");
  const std::string pauli = name == "bit_flip" ? "X" : name == "phase_flip" ? "Z" : "Y";
  return SuperOperator(1, {std::sqrt(p) * gate_matrix("I"), std::sqrt(1.0 - p) * gate_matrix(pauli)});
}

bool is_known_noise(const std::string& name) {
  const std::string n = lower(name);
  return n == "bit_flip" || n == "phase_flip" || n == "bit_phase_flip";
}

Measurement measurement_library(const std::string& raw_name, int n_qubits) {
  const std::string name = upper(raw_name);
  if (!is_known_measurement(name)) throw UnknownGate("unknown measurement '" + raw_name + "'");
  if (n_qubits < 1) throw BadParameter("measurement needs at least one qubit");
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  CMatrix basis_change = CMatrix::Identity(1, 1);
  for (int q = 0; q < n_qubits; ++q)
    basis_change = kron(name == "X" ? gate_matrix("H") : gate_matrix("I"), basis_change);
  Measurement m{n_qubits, {}};
  for (Eigen::Index x = 0; x < d; ++x) {
    const CVector v = basis_change * basis_vector(d, x);
    m.branches.emplace_back(static_cast<int>(x), outer(v));
  }
  return m;
}

bool is_known_measurement(const std::string& name) {
  const std::string n = upper(name);
  return n == "Z" || n == "X";
}

}  // namespace qmc
