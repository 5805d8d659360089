#include "sncert/tstat.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sncert {

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int max_iter = 2000;
  constexpr double eps = 1e-15;
  constexpr double fpmin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  throw std::runtime_error("regularized_incomplete_beta: continued fraction did not converge");
}

double student_t_pdf(double t, double dof) {
  const double lg = std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
                    0.5 * std::log(dof * std::numbers::pi);
  return std::exp(lg - 0.5 * (dof + 1.0) * std::log1p(t * t / dof));
}

// Asymptotic expansion of the t quantile around the normal quantile
// (Cornish-Fisher), accurate far past double precision for dof >= 1e5.
double t_quantile_large_dof(double p_one_sided, double dof) {
  const double z = normal_quantile(p_one_sided);
  const double z3 = z * z * z;
  const double z5 = z3 * z * z;
  return z + (z3 + z) / (4.0 * dof) + (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * dof * dof);
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("regularized_incomplete_beta: parameters must be positive");
  if (x < 0.0 || x > 1.0)
    throw std::invalid_argument("regularized_incomplete_beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile: p must lie strictly inside (0, 1)");
  auto cdf = [](double z) { return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0); };
  auto pdf = [](double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  };
  double lo = -40.0, hi = 40.0, z = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double err = cdf(z) - p;
    if (err > 0.0)
      hi = z;
    else
      lo = z;
    const double deriv = pdf(z);
    double step = deriv > 0.0 ? -err / deriv : 0.0;
    double next = z + step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - z) < 1e-15 * std::max(1.0, std::fabs(z))) return next;
    z = next;
  }
  return z;
}

double student_t_cdf(double t, double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("student_t_cdf: dof must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double x = dof / (t * t + dof);
  const double half_tail = 0.5 * regularized_incomplete_beta(0.5 * dof, 0.5, x);
  return t >= 0.0 ? 1.0 - half_tail : half_tail;
}

double t_quantile(double level, double dof) {
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("t_quantile: level must lie strictly inside (0, 1)");
  if (!(dof >= 1.0)) throw std::invalid_argument("t_quantile: dof must be >= 1");
  const double p = 1.0 - 0.5 * (1.0 - level);  // one-sided target of the upper critical value
  if (dof >= 1e5) return t_quantile_large_dof(p, dof);

  // Bracket the root, then refine with safeguarded Newton on the CDF.
  double lo = 0.0;
  double hi = std::max(1.0, 2.0 * std::fabs(normal_quantile(p)));
  while (student_t_cdf(hi, dof) < p) {
    hi *= 2.0;
    if (hi > 1e12) throw std::runtime_error("t_quantile: failed to bracket the quantile");
  }
  double t = std::min(hi, std::max(lo, normal_quantile(p)));
  for (int it = 0; it < 200; ++it) {
    const double err = student_t_cdf(t, dof) - p;
    if (std::fabs(err) < 1e-9 * std::min(p, 1.0 - p)) break;
    if (err > 0.0)
      hi = t;
    else
      lo = t;
    const double deriv = student_t_pdf(t, dof);
    double next = deriv > 0.0 ? t - err / deriv : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return t;
}

}  // namespace sncert
