#include "sncert/haar.hpp"

#include <cmath>
#include <stdexcept>

namespace sncert {

namespace {
constexpr double k_sqrt_half = 0.70710678118654752440;

// Trace of S*A and S^Tb*A for a d^2 x d^2 operator without forming either
// d^2 x d^2 factor: tr(SA) = sum_{jk} A[(jk),(kj)], tr(S^Tb A) = sum_{jk} A[(jj),(kk)].
double trace_swap_times(const Matrix& a, int d) {
  cdouble acc = 0.0;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) acc += a(j * d + k, k * d + j);
  return acc.real();
}

double trace_swap_pt_times(const Matrix& a, int d) {
  cdouble acc = 0.0;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) acc += a(j * d + j, k * d + k);
  return acc.real();
}
}  // namespace

Matrix sample_haar_unitary(int d, RandomStream& rs) {
  if (d < 1) throw std::invalid_argument("sample_haar_unitary: d must be >= 1");
  matlin::check_dense_alloc(d, d);
  for (;;) {
    Matrix g(d, d);
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r)
        g(r, c) = cdouble(rs.normal() * k_sqrt_half, rs.normal() * k_sqrt_half);
    Eigen::HouseholderQR<Matrix> qr(g);
    Vector diag = qr.matrixQR().diagonal();
    bool degenerate = false;
    for (int k = 0; k < d; ++k)
      if (std::abs(diag(k)) == 0.0) degenerate = true;
    if (degenerate) continue;
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    for (int k = 0; k < d; ++k) q.col(k) *= std::conj(diag(k)) / std::abs(diag(k));
    return q;
  }
}

Matrix sample_haar_orthogonal(int d, RandomStream& rs) {
  if (d < 1) throw std::invalid_argument("sample_haar_orthogonal: d must be >= 1");
  matlin::check_dense_alloc(d, d);
  for (;;) {
    Eigen::MatrixXd g(d, d);
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) g(r, c) = rs.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::VectorXd diag = qr.matrixQR().diagonal();
    bool degenerate = false;
    for (int k = 0; k < d; ++k)
      if (diag(k) == 0.0) degenerate = true;
    if (degenerate) continue;
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
    for (int k = 0; k < d; ++k)
      if (diag(k) < 0.0) q.col(k) = -q.col(k);
    return q.cast<cdouble>();
  }
}

TwirlCoefficients twirl_coefficients(const Matrix& a, int d) {
  const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
  if (a.rows() != dd || a.cols() != dd)
    throw std::invalid_argument("twirl_coefficients: operator must be d^2 x d^2");
  const double tr_a = a.trace().real();
  const double tr_sa = trace_swap_times(a, d);
  const double tr_tb = trace_swap_pt_times(a, d);
  const double dm = static_cast<double>(d);

  TwirlCoefficients out;
  out.a1 = (tr_a - tr_sa / dm) / (dm * dm - 1.0);
  out.a2 = (tr_sa - tr_a / dm) / (dm * dm - 1.0);
  const double den = dm * (dm - 1.0) * (dm + 2.0);
  out.c1 = ((dm + 1.0) * tr_a - tr_sa - tr_tb) / den;
  out.c2 = (-tr_a + (dm + 1.0) * tr_sa - tr_tb) / den;
  out.c3 = (-tr_a - tr_sa + (dm + 1.0) * tr_tb) / den;
  return out;
}

Matrix twirl_unitary_analytic(const Matrix& a, int d) {
  const TwirlCoefficients c = twirl_coefficients(a, d);
  const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
  matlin::check_dense_alloc(dd, dd);
  Matrix out = c.a1 * Matrix::Identity(dd, dd);
  out += c.a2 * matlin::swap_operator(d);
  return out;
}

Matrix twirl_orthogonal_analytic(const Matrix& a, int d) {
  const TwirlCoefficients c = twirl_coefficients(a, d);
  const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
  matlin::check_dense_alloc(dd, dd);
  Matrix out = c.c1 * Matrix::Identity(dd, dd);
  out += c.c2 * matlin::swap_operator(d);
  Vector phi = matlin::max_entangled_ket(d);
  out += (c.c3 * static_cast<double>(d)) * (phi * phi.adjoint());
  return out;
}

}  // namespace sncert
