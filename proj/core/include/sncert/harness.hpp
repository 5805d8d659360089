#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "sncert/baselines.hpp"
#include "sncert/estimator.hpp"
#include "sncert/moments.hpp"
#include "sncert/random_stream.hpp"
#include "sncert/states.hpp"

namespace sncert {

inline constexpr const char* k_version = "0.1.0";

enum class StateFamily {
  max_entangled,
  isotropic,
  partial_entangled,
  thermal,
  random_noise,
  random_hs,
};

std::string to_string(StateFamily family);
StateFamily state_family_from_string(const std::string& name);

// True when every trial sees the same state, so per-cell baselines and the
// exact fidelity witness are well defined at the cell level.
bool family_is_deterministic(StateFamily family);

struct ExperimentConfig {
  int d = 20;
  StateFamily family = StateFamily::isotropic;
  double v = 0.95;        // visibility (isotropic, thermal, random_noise)
  double beta = 1.0;      // thermal decay rate
  int schmidt_rank = 1;   // partial_entangled rank
  int n_ops = 12;         // N: random unitary/orthogonal pairs per trial
  double level = 0.999;   // confidence level
  IntervalMethod method = IntervalMethod::t;
  int bootstrap_resamples = 5000;
  bool exact_expectations = true;
  std::int64_t shots_per_projector = 0;  // 0 -> 100 d when shots mode is on
  int n_iter = 2000;                     // trials per cell
  std::uint64_t seed = 0;
  double mub_alpha = 1.0;
  bool mub_printed_phase = false;
  bool baselines_enabled = true;
  bool record_samples = false;  // keep per-rotation moments in the record
  int threads = 1;              // 0 -> hardware concurrency
};

// Throws std::invalid_argument on out-of-range settings.
void validate_config(const ExperimentConfig& cfg);

// Shot budget actually used in shots mode (the default is 100 d).
std::int64_t resolved_shots_per_projector(const ExperimentConfig& cfg);

int resolved_threads(const ExperimentConfig& cfg);

// Builds the configured state; random families draw from rs (required).
StateModel make_state(const ExperimentConfig& cfg, RandomStream* rs = nullptr);

struct TrialRecord {
  int trial_id = 0;
  double f_lower = 0.0;
  double f_upper = 0.0;
  int sn_estimate = 1;  // mu_est certified by f_lower
  int sn_fid = 1;       // exact fidelity witness for the trial's state
  std::int64_t projector_evals = 0;  // 5 N
  std::int64_t shots_used = 0;       // 5 N M in shots mode, else 0
  MomentSampleSet samples;           // filled when cfg.record_samples
};

// One independent trial. Random streams derive from (cell_index, trial_id,
// stage), so results are reproducible regardless of execution order. Pass
// shared_state to reuse a precomputed state for deterministic families.
TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t cell_index, int trial_id,
                      const StateModel* shared_state = nullptr);

struct CellResult {
  double v = 0.0;
  int n_ops = 0;
  int n_iter = 0;

  int sn_fid = 0;  // cell-level witness (deterministic families; else 0)
  int mu_est_min = 0;
  int mu_est_max = 0;
  double mu_est_mean = 0.0;
  int e_max = 0;        // max over trials of (trial witness - estimate)
  int e_min = 0;        // min over trials of the same difference
  int violations = 0;   // trials whose estimate exceeded the trial witness
  double mean_f_lower = 0.0;
  std::vector<std::int64_t> sn_histogram;  // index mu in [0, d]; counts of estimates

  std::int64_t projector_evals_per_trial = 0;
  std::int64_t shots_per_trial = 0;

  bool has_baselines = false;
  bool mub_valid = false;
  double mub_max_deviation = 0.0;
  double s3d = std::numeric_limits<double>::quiet_NaN();
  int mub_bound = 0;
  std::int64_t mub_projections = 0;
  double corr_norm_sq = std::numeric_limits<double>::quiet_NaN();
  int second_moment_bound = 0;
  double trace_distance_lb = std::numeric_limits<double>::quiet_NaN();

  int failed_trials = 0;
  std::string first_error;
};

struct SweepGrid {
  std::vector<double> v_values;
  std::vector<int> n_ops_values;
};

struct SweepReport {
  ExperimentConfig config;
  SweepGrid grid;
  std::vector<CellResult> cells;  // v-major, n_ops-minor order
};

// Runs n_iter trials for every (v, n_ops) grid cell, parallel over trials.
// Deterministic for fixed (config, grid) independent of thread count.
SweepReport run_sweep(const ExperimentConfig& cfg, const SweepGrid& grid);

// Serialization. The CSV is a flat per-cell table under the schema comment
// "# sncert-sweep-csv v1"; JSON round-trips the full report exactly.
void write_report_csv(std::ostream& os, const SweepReport& report);
void write_report_json(std::ostream& os, const SweepReport& report);
SweepReport read_report_json(std::istream& is);

// Writes the report to `out_path` in "csv" or "json" format plus a
// `<out_path>.meta.json` sidecar carrying config, grid, seed, version, and
// wall-clock timestamp (the report files themselves stay deterministic).
// Returns the sidecar path.
std::string write_report_files(const SweepReport& report, const std::string& out_path,
                               const std::string& format);

}  // namespace sncert
