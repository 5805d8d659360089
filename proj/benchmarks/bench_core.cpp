#include <benchmark/benchmark.h>

#include "sncert/estimator.hpp"
#include "sncert/haar.hpp"
#include "sncert/harness.hpp"
#include "sncert/moments.hpp"
#include "sncert/random_stream.hpp"
#include "sncert/states.hpp"
#include "sncert/tstat.hpp"

namespace {

using namespace sncert;

void bm_haar_unitary(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  RandomStream rs(1, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_haar_unitary(d, rs));
  }
}
BENCHMARK(bm_haar_unitary)->Arg(8)->Arg(20)->Arg(30);

void bm_haar_orthogonal(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  RandomStream rs(1, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_haar_orthogonal(d, rs));
  }
}
BENCHMARK(bm_haar_orthogonal)->Arg(8)->Arg(20)->Arg(30);

void bm_projector_expectation_structured(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const StateModel rho = isotropic_state(d, 0.95);
  RandomStream rs(2, 0);
  const Matrix u = sample_haar_unitary(d, rs);
  const Vector x = u.col(0);
  const Vector y = u.col(d - 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rho.product_projector_expectation(x, y));
  }
}
BENCHMARK(bm_projector_expectation_structured)->Arg(8)->Arg(20)->Arg(30);

void bm_projector_expectation_dense(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const StateModel structured = isotropic_state(d, 0.95);
  const StateModel rho = StateModel::dense(d, structured.to_dense());
  RandomStream rs(2, 0);
  const Matrix u = sample_haar_unitary(d, rs);
  const Vector x = u.col(0);
  const Vector y = u.col(d - 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rho.product_projector_expectation(x, y));
  }
}
BENCHMARK(bm_projector_expectation_dense)->Arg(8)->Arg(20);

void bm_t_quantile(benchmark::State& state) {
  double dof = 11.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(t_quantile(0.999, dof));
  }
}
BENCHMARK(bm_t_quantile);

void bm_bootstrap_interval(benchmark::State& state) {
  RandomStream rs(3, 0);
  std::vector<double> xs(12);
  for (double& x : xs) x = rs.normal();
  for (auto _ : state) {
    RandomStream boot(4, 0);
    benchmark::DoNotOptimize(bootstrap_confidence_interval(xs, 0.999, 5000, boot));
  }
}
BENCHMARK(bm_bootstrap_interval);

void bm_trial_exact(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.d = static_cast<int>(state.range(0));
  cfg.v = 0.95;
  cfg.n_ops = 12;
  cfg.seed = 5;
  int trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trial(cfg, 0, trial++));
  }
}
BENCHMARK(bm_trial_exact)->Arg(8)->Arg(20)->Arg(30);

void bm_trial_shots(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.d = static_cast<int>(state.range(0));
  cfg.v = 0.95;
  cfg.n_ops = 12;
  cfg.exact_expectations = false;
  cfg.seed = 5;
  int trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trial(cfg, 0, trial++));
  }
}
BENCHMARK(bm_trial_shots)->Arg(8)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
