#include "sncert/observables.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace sncert {

namespace {
constexpr double k_herm_tol = 1e-12;
constexpr double k_spectrum_tol = 1e-8;
constexpr double k_degenerate_tol = 1e-12;
constexpr double k_sqrt_half = 0.70710678118654752440;
}  // namespace

ObservablePair ObservablePair::rank_optimal(int d, int basis_index) {
  if (d < 2) throw std::invalid_argument("ObservablePair: d must be >= 2");
  if (basis_index < 0 || basis_index >= d)
    throw std::invalid_argument("ObservablePair: basis index out of range");
  ObservablePair out;
  out.d_ = d;
  out.rank_optimal_ = true;
  out.basis_index_ = basis_index;

  out.m_ = Matrix::Zero(d, d);
  out.m_(basis_index, basis_index) = 1.0;
  out.m_spectrum_ = Eigen::VectorXd::Zero(d);
  out.m_spectrum_(0) = 1.0;

  out.mhat_ = Matrix::Zero(d, d);
  out.mhat_(0, d - 1) = cdouble(0.0, -1.0);
  out.mhat_(d - 1, 0) = cdouble(0.0, 1.0);
  out.mhat_spectrum_ = Eigen::VectorXd::Zero(d);
  out.mhat_spectrum_(0) = 1.0;
  out.mhat_spectrum_(1) = -1.0;

  out.mhat_plus_ = Vector::Zero(d);
  out.mhat_plus_(0) = k_sqrt_half;
  out.mhat_plus_(d - 1) = cdouble(0.0, k_sqrt_half);
  out.mhat_minus_ = Vector::Zero(d);
  out.mhat_minus_(0) = k_sqrt_half;
  out.mhat_minus_(d - 1) = cdouble(0.0, -k_sqrt_half);
  return out;
}

ObservablePair ObservablePair::general(Matrix m, Eigen::VectorXd m_spectrum, Matrix mhat,
                                       Eigen::VectorXd mhat_spectrum) {
  const int d = static_cast<int>(m.rows());
  if (d < 2 || m.cols() != d || mhat.rows() != d || mhat.cols() != d)
    throw std::invalid_argument("ObservablePair: observables must be d x d with d >= 2");
  if (m_spectrum.size() != d || mhat_spectrum.size() != d)
    throw std::invalid_argument("ObservablePair: spectra must have d entries");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > k_herm_tol)
    throw std::invalid_argument("ObservablePair: M is not Hermitian");
  if ((mhat - mhat.adjoint()).cwiseAbs().maxCoeff() > k_herm_tol)
    throw std::invalid_argument("ObservablePair: Mhat is not Hermitian");
  if ((mhat.transpose() + mhat).cwiseAbs().maxCoeff() > k_herm_tol)
    throw std::invalid_argument("ObservablePair: Mhat is not antisymmetric");

  const double scale_m = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double scale_h = std::max(1.0, mhat.cwiseAbs().maxCoeff());
  if (std::abs(m.trace().real() - m_spectrum.sum()) > k_spectrum_tol * scale_m ||
      std::abs((m * m).trace().real() - m_spectrum.squaredNorm()) >
          k_spectrum_tol * scale_m * scale_m)
    throw std::invalid_argument("ObservablePair: M spectrum inconsistent with M");
  if (std::abs(mhat.trace().real() - mhat_spectrum.sum()) > k_spectrum_tol * scale_h ||
      std::abs((mhat * mhat).trace().real() - mhat_spectrum.squaredNorm()) >
          k_spectrum_tol * scale_h * scale_h)
    throw std::invalid_argument("ObservablePair: Mhat spectrum inconsistent with Mhat");

  ObservablePair out;
  out.d_ = d;
  out.rank_optimal_ = false;
  out.m_ = std::move(m);
  out.mhat_ = std::move(mhat);
  out.m_spectrum_ = std::move(m_spectrum);
  out.mhat_spectrum_ = std::move(mhat_spectrum);
  return out;
}

const Vector& ObservablePair::mhat_plus() const {
  if (!rank_optimal_)
    throw std::logic_error("ObservablePair: projection eigenvectors exist only for the rank-optimal pair");
  return mhat_plus_;
}

const Vector& ObservablePair::mhat_minus() const {
  if (!rank_optimal_)
    throw std::logic_error("ObservablePair: projection eigenvectors exist only for the rank-optimal pair");
  return mhat_minus_;
}

GeneralCoefficients general_coefficients(const ObservablePair& obs) {
  const double d = static_cast<double>(obs.local_dim());
  const double s1 = obs.m_spectrum().sum();
  const double s2 = obs.m_spectrum().squaredNorm();
  const double h1 = obs.mhat_spectrum().sum();
  const double h2 = obs.mhat_spectrum().squaredNorm();

  GeneralCoefficients c;
  c.a1 = (s1 * s1 - s2 / d) / (d * d - 1.0);
  c.a2 = (s2 - s1 * s1 / d) / (d * d - 1.0);
  const double den = d * (d - 1.0) * (d + 2.0);
  c.c1 = (d + 1.0) * h1 * h1 / den;
  c.c2 = (-h1 * h1 + (d + 2.0) * h2) / den;
  c.c3 = (-h1 * h1 - (d + 2.0) * h2) / den;
  if (std::abs(c.c3) < k_degenerate_tol)
    throw std::invalid_argument(
        "general_coefficients: degenerate observable pair (c3 ~ 0), fidelity reconstruction impossible");
  return c;
}

}  // namespace sncert
