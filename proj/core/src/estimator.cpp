#include "sncert/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>

namespace sncert {

namespace {

double sample_mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// Unbiased (n-1 denominator) sample standard deviation.
double sample_sd(const std::vector<double>& xs, double mean) {
  double ss = 0.0;
  for (double x : xs) {
    const double dev = x - mean;
    ss += dev * dev;
  }
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

// Linear-interpolation quantile of pre-sorted data, q in [0, 1].
double sorted_quantile(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  const double h = q * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence level must lie strictly between 0 and 1");
  }
}

}  // namespace

std::string to_string(IntervalMethod method) {
  switch (method) {
    case IntervalMethod::t:
      return "t";
    case IntervalMethod::bootstrap_percentile:
      return "bootstrap";
    case IntervalMethod::bootstrap_literal:
      return "bootstrap-literal";
  }
  throw std::logic_error("unknown interval method");
}

IntervalMethod interval_method_from_string(const std::string& name) {
  if (name == "t") return IntervalMethod::t;
  if (name == "bootstrap" || name == "bootstrap-percentile") {
    return IntervalMethod::bootstrap_percentile;
  }
  if (name == "bootstrap-literal") return IntervalMethod::bootstrap_literal;
  throw std::invalid_argument("unknown interval method: " + name);
}

double per_sample_fidelity(double e_u, double e_o, int d) {
  if (d < 2) throw std::invalid_argument("local dimension must be at least 2");
  const double dd = static_cast<double>(d);
  return (dd + 1.0) * e_u - 0.5 * (dd - 1.0) * e_o - 1.0 / dd;
}

FidelitySampleSet per_sample_fidelities(const MomentSampleSet& ms) {
  if (ms.e_u.size() != ms.e_o.size()) {
    throw std::invalid_argument("moment sample set has mismatched column lengths");
  }
  FidelitySampleSet fs;
  fs.d = ms.d;
  fs.values.reserve(ms.e_u.size());
  for (std::size_t i = 0; i < ms.e_u.size(); ++i) {
    fs.values.push_back(per_sample_fidelity(ms.e_u[i], ms.e_o[i], ms.d));
  }
  return fs;
}

ConfidenceInterval t_confidence_interval(const std::vector<double>& xs, double level) {
  check_level(level);
  if (xs.size() < 2) {
    throw std::invalid_argument("t interval needs at least two samples");
  }
  const double n = static_cast<double>(xs.size());
  const double mean = sample_mean(xs);
  const double sd = sample_sd(xs, mean);
  const double half = sd * t_quantile(level, n - 1.0) / std::sqrt(n);
  return ConfidenceInterval{mean - half, mean + half, level};
}

ConfidenceInterval bootstrap_confidence_interval(const std::vector<double>& xs, double level,
                                                 int resamples, RandomStream& rs, bool literal) {
  check_level(level);
  if (xs.empty()) throw std::invalid_argument("bootstrap needs at least one sample");
  if (resamples < 2) throw std::invalid_argument("bootstrap needs at least two resamples");

  const std::size_t n = xs.size();
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (double& m : means) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += xs[rs.uniform_index(n)];
    m = acc / static_cast<double>(n);
  }

  if (literal) {
    // Treats the resampled means as if they were independent observations;
    // the width shrinks like 1/sqrt(resamples), so this is not a calibrated
    // interval for the data mean. Retained for side-by-side comparisons.
    return t_confidence_interval(means, level);
  }

  std::sort(means.begin(), means.end());
  const double tail = 0.5 * (1.0 - level);
  return ConfidenceInterval{sorted_quantile(means, tail), sorted_quantile(means, 1.0 - tail),
                            level};
}

SnEstimate estimate_sn(const FidelitySampleSet& fs, double level, IntervalMethod method,
                       int resamples, RandomStream* rs) {
  ConfidenceInterval ci;
  switch (method) {
    case IntervalMethod::t:
      ci = t_confidence_interval(fs.values, level);
      break;
    case IntervalMethod::bootstrap_percentile:
    case IntervalMethod::bootstrap_literal:
      if (rs == nullptr) {
        throw std::invalid_argument("bootstrap interval needs a random stream");
      }
      ci = bootstrap_confidence_interval(fs.values, level, resamples, *rs,
                                         method == IntervalMethod::bootstrap_literal);
      break;
  }
  SnEstimate est;
  est.d = fs.d;
  est.f_lower = ci.lower;
  est.f_upper = ci.upper;
  est.sn_lower = sn_from_fidelity(ci.lower, fs.d);
  est.level = level;
  est.method = method;
  est.samples = fs.values.size();
  return est;
}

ErrorMetrics error_metrics(const std::vector<int>& sn_estimates, int sn_fid) {
  if (sn_estimates.empty()) {
    throw std::invalid_argument("error metrics need at least one estimate");
  }
  const auto [lo, hi] = std::minmax_element(sn_estimates.begin(), sn_estimates.end());
  return ErrorMetrics{sn_fid - *lo, sn_fid - *hi};
}

int sn_fidelity_witness(const StateModel& rho) {
  return sn_from_fidelity(rho.fidelity_max_entangled(), rho.local_dim());
}

}  // namespace sncert
