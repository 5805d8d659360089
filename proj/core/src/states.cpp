#include "sncert/states.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace sncert {

namespace {
using RowMat = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapKet = Eigen::Map<const RowMat>;

constexpr double k_trace_tol = 1e-10;
constexpr double k_herm_tol = 1e-12;

// View a ket on C^{d^2} as its d x d coefficient matrix K with
// k_{a*d+b} = K(a,b).
MapKet as_matrix(const Vector& k, int d) { return MapKet(k.data(), d, d); }
}  // namespace

StateModel StateModel::dense(int d, Matrix rho) {
  if (d < 2) throw std::invalid_argument("StateModel: d must be >= 2");
  const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
  if (rho.rows() != dd || rho.cols() != dd)
    throw std::invalid_argument("StateModel: dense state must be d^2 x d^2");
  matlin::check_dense_alloc(dd, dd);
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > k_herm_tol)
    throw std::invalid_argument("StateModel: dense state is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > k_trace_tol || std::abs(rho.trace().imag()) > k_trace_tol)
    throw std::invalid_argument("StateModel: dense state trace differs from 1");
  StateModel out;
  out.d_ = d;
  out.is_dense_ = true;
  out.dense_ = std::move(rho);
  return out;
}

StateModel StateModel::structured(int d, std::vector<double> weights, std::vector<Vector> kets,
                                  double identity_coeff) {
  if (d < 2) throw std::invalid_argument("StateModel: d must be >= 2");
  if (weights.size() != kets.size())
    throw std::invalid_argument("StateModel: weight/ket count mismatch");
  const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
  double tr = identity_coeff * static_cast<double>(dd);
  for (std::size_t i = 0; i < kets.size(); ++i) {
    if (kets[i].size() != dd)
      throw std::invalid_argument("StateModel: ket dimension must be d^2");
    if (weights[i] < -1e-12) throw std::invalid_argument("StateModel: negative weight");
    if (std::abs(kets[i].squaredNorm() - 1.0) > 1e-10)
      throw std::invalid_argument("StateModel: kets must be normalized");
    tr += weights[i];
  }
  if (identity_coeff < -1e-15) throw std::invalid_argument("StateModel: negative identity coefficient");
  if (std::abs(tr - 1.0) > k_trace_tol)
    throw std::invalid_argument("StateModel: structured state trace differs from 1");
  StateModel out;
  out.d_ = d;
  out.is_dense_ = false;
  out.weights_ = std::move(weights);
  out.kets_ = std::move(kets);
  out.identity_coeff_ = identity_coeff;
  return out;
}

double StateModel::trace() const {
  if (is_dense_) return dense_.trace().real();
  double tr = identity_coeff_ * static_cast<double>(d_) * d_;
  for (std::size_t i = 0; i < weights_.size(); ++i) tr += weights_[i] * kets_[i].squaredNorm();
  return tr;
}

Matrix StateModel::to_dense() const {
  const Eigen::Index dd = static_cast<Eigen::Index>(d_) * d_;
  matlin::check_dense_alloc(dd, dd);
  if (is_dense_) return dense_;
  Matrix out = identity_coeff_ * Matrix::Identity(dd, dd);
  for (std::size_t i = 0; i < weights_.size(); ++i)
    out += weights_[i] * (kets_[i] * kets_[i].adjoint());
  return out;
}

double StateModel::product_projector_expectation(const Vector& x, const Vector& y) const {
  if (x.size() != d_ || y.size() != d_)
    throw std::invalid_argument("product_projector_expectation: kets must live on C^d");
  if (is_dense_) {
    Vector z = matlin::kron(x, y);
    return (z.adjoint() * dense_ * z).value().real();
  }
  // <k|x ⊗ y> = x^T conj(K) y with K the ket's coefficient matrix.
  double acc = identity_coeff_ * x.squaredNorm() * y.squaredNorm();
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const cdouble amp = (x.transpose() * (as_matrix(kets_[i], d_).conjugate() * y)).value();
    acc += weights_[i] * std::norm(amp);
  }
  return acc;
}

double StateModel::observable_pair_expectation(const Matrix& a) const {
  if (a.rows() != d_ || a.cols() != d_)
    throw std::invalid_argument("observable_pair_expectation: observable must be d x d");
  if (is_dense_) {
    Matrix aa = matlin::kron(a, a);
    return aa.transpose().cwiseProduct(dense_).sum().real();
  }
  const double tr_a = a.trace().real();
  double acc = identity_coeff_ * tr_a * tr_a;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    MapKet k = as_matrix(kets_[i], d_);
    // <k|(a ⊗ a)|k> = sum conj(K) ∘ (a K a^T)
    const cdouble val = k.conjugate().cwiseProduct(a * k * a.transpose()).sum();
    acc += weights_[i] * val.real();
  }
  return acc;
}

double StateModel::trace_swap() const {
  if (is_dense_) {
    cdouble acc = 0.0;
    for (int j = 0; j < d_; ++j)
      for (int k = 0; k < d_; ++k) acc += dense_(j * d_ + k, k * d_ + j);
    return acc.real();
  }
  double acc = identity_coeff_ * static_cast<double>(d_);
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    MapKet k = as_matrix(kets_[i], d_);
    acc += weights_[i] * k.conjugate().cwiseProduct(k.transpose()).sum().real();
  }
  return acc;
}

double StateModel::trace_swap_partial_transpose() const {
  if (is_dense_) {
    cdouble acc = 0.0;
    for (int j = 0; j < d_; ++j)
      for (int k = 0; k < d_; ++k) acc += dense_(j * d_ + j, k * d_ + k);
    return acc.real();
  }
  double acc = identity_coeff_ * static_cast<double>(d_);
  for (std::size_t i = 0; i < weights_.size(); ++i)
    acc += weights_[i] * std::norm(as_matrix(kets_[i], d_).trace());
  return acc;
}

double StateModel::purity() const {
  if (is_dense_) return dense_.squaredNorm();  // tr(rho^2) = ||rho||_F^2 for Hermitian rho
  const double dd = static_cast<double>(d_) * d_;
  double acc = identity_coeff_ * identity_coeff_ * dd;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    acc += 2.0 * identity_coeff_ * weights_[i] * kets_[i].squaredNorm();
    for (std::size_t j = 0; j < weights_.size(); ++j) {
      const cdouble ov = kets_[i].dot(kets_[j]);  // <k_i|k_j>
      acc += weights_[i] * weights_[j] * std::norm(ov);
    }
  }
  return acc;
}

Matrix StateModel::reduced_a() const {
  if (is_dense_) return matlin::partial_trace(dense_, d_, matlin::Subsystem::b);
  Matrix out = (identity_coeff_ * static_cast<double>(d_)) * Matrix::Identity(d_, d_);
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    MapKet k = as_matrix(kets_[i], d_);
    out += weights_[i] * (k * k.adjoint());
  }
  return out;
}

Matrix StateModel::reduced_b() const {
  if (is_dense_) return matlin::partial_trace(dense_, d_, matlin::Subsystem::a);
  Matrix out = (identity_coeff_ * static_cast<double>(d_)) * Matrix::Identity(d_, d_);
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    MapKet k = as_matrix(kets_[i], d_);
    out += weights_[i] * (k.transpose() * k.conjugate());
  }
  return out;
}

double StateModel::fidelity_max_entangled() const {
  return trace_swap_partial_transpose() / static_cast<double>(d_);
}

StateModel max_entangled_state(int d) {
  return StateModel::structured(d, {1.0}, {matlin::max_entangled_ket(d)}, 0.0);
}

StateModel isotropic_state(int d, double v) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument("isotropic_state: v must lie in [0, 1]");
  const double dd = static_cast<double>(d) * d;
  return StateModel::structured(d, {v}, {matlin::max_entangled_ket(d)}, (1.0 - v) / dd);
}

StateModel partial_entangled_state(int d, int schmidt_rank) {
  if (schmidt_rank < 1 || schmidt_rank > d)
    throw std::invalid_argument("partial_entangled_state: rank must lie in [1, d]");
  Vector k = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(schmidt_rank));
  for (int j = 0; j < schmidt_rank; ++j) k(static_cast<Eigen::Index>(j) * d + j) = amp;
  return StateModel::structured(d, {1.0}, {std::move(k)}, 0.0);
}

StateModel thermal_state(int d, double v, double beta) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument("thermal_state: v must lie in [0, 1]");
  Vector k = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  double norm_sq = 0.0;
  for (int j = 0; j < d; ++j) norm_sq += std::exp(-2.0 * beta * j);
  const double norm = std::sqrt(norm_sq);
  for (int j = 0; j < d; ++j)
    k(static_cast<Eigen::Index>(j) * d + j) = std::exp(-beta * j) / norm;
  const double dd = static_cast<double>(d) * d;
  return StateModel::structured(d, {v}, {std::move(k)}, (1.0 - v) / dd);
}

Matrix random_hs_density(int dim, RandomStream& rs) {
  if (dim < 1) throw std::invalid_argument("random_hs_density: dim must be >= 1");
  matlin::check_dense_alloc(dim, dim);
  Matrix g(dim, dim);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) g(r, c) = cdouble(rs.normal(), rs.normal());
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

StateModel random_hs_state(int d, RandomStream& rs) {
  return StateModel::dense(d, random_hs_density(d * d, rs));
}

StateModel random_noise_state(int d, double v, RandomStream& rs) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument("random_noise_state: v must lie in [0, 1]");
  Matrix rho = (1.0 - v) * random_hs_density(d * d, rs);
  Vector phi = matlin::max_entangled_ket(d);
  rho += v * (phi * phi.adjoint());
  return StateModel::dense(d, std::move(rho));
}

double fidelity_direct(const StateModel& rho) { return rho.fidelity_max_entangled(); }

int sn_exact_isotropic(int d, double v) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument("sn_exact_isotropic: v must lie in [0, 1]");
  int sn = 1;
  const double dm = static_cast<double>(d);
  for (int mu = 1; mu <= d - 1; ++mu) {
    const double threshold = (mu * dm - 1.0) / (dm * dm - 1.0);
    if (v > threshold) sn = mu + 1;
  }
  return sn;
}

}  // namespace sncert
