#pragma once

#include <string>
#include <vector>

#include "sncert/moments.hpp"
#include "sncert/random_stream.hpp"
#include "sncert/states.hpp"
#include "sncert/tstat.hpp"

namespace sncert {

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;
};

enum class IntervalMethod {
  t,                     // mean ± t_{level, n-1} s / sqrt(n)
  bootstrap_percentile,  // percentile interval of resampled means (default bootstrap)
  bootstrap_literal,     // t-formula applied to the size-B set of resampled means
};

std::string to_string(IntervalMethod method);
IntervalMethod interval_method_from_string(const std::string& name);

// Per-rotation fidelity estimate F^(l) = (d+1) E_U - (d-1)/2 E_O - 1/d.
double per_sample_fidelity(double e_u, double e_o, int d);

struct FidelitySampleSet {
  int d = 0;
  std::vector<double> values;
};

FidelitySampleSet per_sample_fidelities(const MomentSampleSet& ms);

// Two-sided central t interval for the mean; needs n >= 2. The level is
// read as central coverage (level 0.95 uses the 97.5% critical value).
ConfidenceInterval t_confidence_interval(const std::vector<double>& xs, double level);

// Nonparametric bootstrap of the mean with `resamples` resamples drawn
// through `rs`. `literal` selects the literal construction (see
// IntervalMethod::bootstrap_literal), which degenerates toward zero width
// as resamples grows and is kept only for comparison runs.
ConfidenceInterval bootstrap_confidence_interval(const std::vector<double>& xs, double level,
                                                 int resamples, RandomStream& rs,
                                                 bool literal = false);

struct SnEstimate {
  int d = 0;
  double f_lower = 0.0;
  double f_upper = 0.0;
  int sn_lower = 1;  // Schmidt number certified from f_lower
  double level = 0.0;
  IntervalMethod method = IntervalMethod::t;
  std::size_t samples = 0;
};

// Confidence interval on the mean fidelity plus the Schmidt-number bound
// certified by its lower edge. Bootstrap methods require rs.
SnEstimate estimate_sn(const FidelitySampleSet& fs, double level, IntervalMethod method,
                       int resamples = 5000, RandomStream* rs = nullptr);

// Spread of certified bounds across repeated trials against the exact
// fidelity witness: e_max = sn_fid - min est, e_min = sn_fid - max est.
struct ErrorMetrics {
  int e_max = 0;
  int e_min = 0;
};

ErrorMetrics error_metrics(const std::vector<int>& sn_estimates, int sn_fid);

// Exact fidelity witness: the certified bound with F known exactly.
int sn_fidelity_witness(const StateModel& rho);

}  // namespace sncert
