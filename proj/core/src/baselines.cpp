#include "sncert/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "sncert/moments.hpp"

namespace sncert {

namespace {

constexpr double k_orthonormality_tol = 1e-10;
constexpr double k_unbiasedness_tol = 1e-8;
constexpr double k_ceil_slack = 1e-9;
constexpr double k_purity_slack = 1e-12;

Matrix quadratic_phase_basis(int d, double quad_alpha, double lin) {
  const double dd = static_cast<double>(d);
  const double inv_sqrt_d = 1.0 / std::sqrt(dd);
  Matrix b(d, d);
  for (int a = 0; a < d; ++a) {
    for (int row = 0; row < d; ++row) {
      const double j = static_cast<double>(row + 1);
      const double phase =
          2.0 * std::numbers::pi * (quad_alpha * j * j / (2.0 * dd) + static_cast<double>(a) * j * lin);
      b(row, a) = inv_sqrt_d * std::polar(1.0, phase);
    }
  }
  return b;
}

}  // namespace

MubTriple build_3mubs(int d, double alpha, bool printed_phase_convention) {
  if (d < 2) throw std::invalid_argument("local dimension must be at least 2");
  MubTriple triple;
  triple.d = d;
  triple.alpha = alpha;
  triple.printed_phase_convention = printed_phase_convention;

  const double lin = printed_phase_convention ? 1.0 / (2.0 * d) : 1.0 / d;
  triple.bases[0] = Matrix::Identity(d, d);
  triple.bases[1] = quadratic_phase_basis(d, alpha, lin);
  triple.bases[2] = quadratic_phase_basis(d, alpha + static_cast<double>(d - 1), lin);

  double ortho_dev = 0.0;
  for (const auto& basis : triple.bases) {
    const Matrix gram = basis.adjoint() * basis;
    ortho_dev = std::max(ortho_dev,
                         (gram - Matrix::Identity(d, d)).cwiseAbs().maxCoeff());
  }

  double unbias_dev = 0.0;
  const double target = 1.0 / static_cast<double>(d);
  for (int z = 0; z < 3; ++z) {
    for (int zp = z + 1; zp < 3; ++zp) {
      const Matrix overlaps = triple.bases[z].adjoint() * triple.bases[zp];
      unbias_dev = std::max(
          unbias_dev, (overlaps.cwiseAbs2().array() - target).abs().maxCoeff());
    }
  }

  triple.max_deviation = std::max(ortho_dev, unbias_dev);
  triple.valid = ortho_dev <= k_orthonormality_tol && unbias_dev <= k_unbiasedness_tol;
  return triple;
}

double s3d_statistic(const StateModel& rho, const MubTriple& mubs) {
  if (mubs.d != rho.local_dim()) {
    throw std::invalid_argument("basis dimension does not match the state");
  }
  double acc = 0.0;
  for (const auto& basis : mubs.bases) {
    for (int a = 0; a < mubs.d; ++a) {
      const Vector ket = basis.col(a);
      acc += rho.product_projector_expectation(ket, ket.conjugate());
    }
  }
  return acc;
}

int sn_from_3mubs(double s, int d) {
  if (d < 2) throw std::invalid_argument("local dimension must be at least 2");
  const double raw = static_cast<double>(d) * (s - 1.0) / 2.0;
  const auto bound = static_cast<int>(std::ceil(raw - k_ceil_slack));
  return std::min(d, std::max(1, bound));
}

double correlation_norm_sq(const StateModel& rho) {
  const double dd = static_cast<double>(rho.local_dim());
  const double purity_a = rho.reduced_a().squaredNorm();
  const double purity_b = rho.reduced_b().squaredNorm();
  return dd * dd * rho.purity() - dd * purity_a - dd * purity_b + 1.0;
}

int sn_from_second_moment(const StateModel& rho) {
  const int d = rho.local_dim();
  const double dd = static_cast<double>(d);
  const double t2 = correlation_norm_sq(rho);

  // Reference ladder: a rank-mu maximally entangled ket has correlation
  // norm d^2 + 1 - 2d/mu, strictly increasing in mu. The certified bound
  // is the smallest rung the state's value does not exceed.
  int ladder_bound = d;
  for (int mu = 1; mu < d; ++mu) {
    const double reference = dd * dd + 1.0 - 2.0 * dd / static_cast<double>(mu);
    if (t2 <= reference + k_ceil_slack) {
      ladder_bound = mu;
      break;
    }
  }

  // Purity comparison: any Schmidt-number-1 (separable) state obeys
  // tr(rho^2) <= max marginal purity, so exceeding it certifies >= 2.
  const double purity_a = rho.reduced_a().squaredNorm();
  const double purity_b = rho.reduced_b().squaredNorm();
  const bool purity_detects = rho.purity() > std::max(purity_a, purity_b) + k_purity_slack;

  return std::max(ladder_bound, purity_detects ? 2 : 1);
}

double trace_distance_lower_bound(double r, double q, int d) {
  return fidelity_from_moments(r, q, d) - 1.0 / static_cast<double>(d);
}

CriterionResult mub_criterion(const StateModel& rho, const MubTriple& mubs) {
  if (!mubs.valid) {
    throw std::invalid_argument(
        "refusing to certify with a basis triple that failed validation "
        "(max deviation " +
        std::to_string(mubs.max_deviation) + ")");
  }
  CriterionResult result;
  result.name = "3-mubs";
  result.statistic = s3d_statistic(rho, mubs);
  result.sn_bound = sn_from_3mubs(result.statistic, rho.local_dim());
  result.projection_count = 3L * rho.local_dim();
  return result;
}

CriterionResult second_moment_criterion(const StateModel& rho) {
  CriterionResult result;
  result.name = "second-moment";
  result.statistic = correlation_norm_sq(rho);
  result.sn_bound = sn_from_second_moment(rho);
  result.projection_count = 0;  // evaluated analytically from the state
  return result;
}

}  // namespace sncert
