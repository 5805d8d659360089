#include "sncert/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "json.hpp"

#include "sncert/haar.hpp"
#include "sncert/shots.hpp"

namespace sncert {

using ordered_json = nlohmann::ordered_json;

std::string to_string(StateFamily family) {
  switch (family) {
    case StateFamily::max_entangled:
      return "max-entangled";
    case StateFamily::isotropic:
      return "isotropic";
    case StateFamily::partial_entangled:
      return "partial-entangled";
    case StateFamily::thermal:
      return "thermal";
    case StateFamily::random_noise:
      return "random-noise";
    case StateFamily::random_hs:
      return "random-hs";
  }
  throw std::logic_error("unknown state family");
}

StateFamily state_family_from_string(const std::string& name) {
  if (name == "max-entangled") return StateFamily::max_entangled;
  if (name == "isotropic") return StateFamily::isotropic;
  if (name == "partial-entangled") return StateFamily::partial_entangled;
  if (name == "thermal") return StateFamily::thermal;
  if (name == "random-noise") return StateFamily::random_noise;
  if (name == "random-hs") return StateFamily::random_hs;
  throw std::invalid_argument("unknown state family: " + name);
}

bool family_is_deterministic(StateFamily family) {
  return family != StateFamily::random_noise && family != StateFamily::random_hs;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.d < 2) throw std::invalid_argument("local dimension must be at least 2");
  if (cfg.n_ops < 2) {
    throw std::invalid_argument("need at least two random-operation pairs per trial");
  }
  if (!(cfg.level > 0.0 && cfg.level < 1.0)) {
    throw std::invalid_argument("confidence level must lie strictly between 0 and 1");
  }
  if (cfg.bootstrap_resamples < 2) {
    throw std::invalid_argument("bootstrap needs at least two resamples");
  }
  if (cfg.n_iter < 1) throw std::invalid_argument("trial count must be positive");
  if (cfg.shots_per_projector < 0) {
    throw std::invalid_argument("shots per projector must be nonnegative");
  }
  if (cfg.threads < 0) throw std::invalid_argument("thread count must be nonnegative");

  const bool uses_v = cfg.family == StateFamily::isotropic ||
                      cfg.family == StateFamily::thermal ||
                      cfg.family == StateFamily::random_noise;
  if (uses_v && !(cfg.v >= 0.0 && cfg.v <= 1.0)) {
    throw std::invalid_argument("visibility must lie in [0, 1]");
  }
  if (cfg.family == StateFamily::thermal && !(cfg.beta >= 0.0)) {
    throw std::invalid_argument("thermal decay rate must be nonnegative");
  }
  if (cfg.family == StateFamily::partial_entangled &&
      (cfg.schmidt_rank < 1 || cfg.schmidt_rank > cfg.d)) {
    throw std::invalid_argument("schmidt rank must lie in [1, d]");
  }
}

std::int64_t resolved_shots_per_projector(const ExperimentConfig& cfg) {
  if (cfg.exact_expectations) return 0;
  return cfg.shots_per_projector > 0 ? cfg.shots_per_projector
                                     : default_shots_per_projector(cfg.d);
}

int resolved_threads(const ExperimentConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

StateModel make_state(const ExperimentConfig& cfg, RandomStream* rs) {
  switch (cfg.family) {
    case StateFamily::max_entangled:
      return max_entangled_state(cfg.d);
    case StateFamily::isotropic:
      return isotropic_state(cfg.d, cfg.v);
    case StateFamily::partial_entangled:
      return partial_entangled_state(cfg.d, cfg.schmidt_rank);
    case StateFamily::thermal:
      return thermal_state(cfg.d, cfg.v, cfg.beta);
    case StateFamily::random_noise:
    case StateFamily::random_hs:
      if (rs == nullptr) {
        throw std::invalid_argument("random state family needs a random stream");
      }
      return cfg.family == StateFamily::random_noise ? random_noise_state(cfg.d, cfg.v, *rs)
                                                     : random_hs_state(cfg.d, *rs);
  }
  throw std::logic_error("unknown state family");
}

namespace {

// Random-stream stages within one trial. Keeping them distinct makes every
// consumer independent of how much randomness the others draw.
enum Stage : std::uint64_t {
  k_stage_state = 0,
  k_stage_unitary = 1,
  k_stage_orthogonal = 2,
  k_stage_shots = 3,
  k_stage_bootstrap = 4,
};

}  // namespace

TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t cell_index, int trial_id,
                      const StateModel* shared_state) {
  validate_config(cfg);

  StateModel local_state;
  const StateModel* state = shared_state;
  if (state == nullptr) {
    if (family_is_deterministic(cfg.family)) {
      local_state = make_state(cfg);
    } else {
      RandomStream state_rs(cfg.seed,
                            derive_stream_id(cell_index, static_cast<std::uint64_t>(trial_id),
                                             k_stage_state));
      local_state = make_state(cfg, &state_rs);
    }
    state = &local_state;
  }

  const ObservablePair obs = ObservablePair::rank_optimal(cfg.d);
  RandomStream u_rs(cfg.seed, derive_stream_id(cell_index, static_cast<std::uint64_t>(trial_id),
                                               k_stage_unitary));
  RandomStream o_rs(cfg.seed, derive_stream_id(cell_index, static_cast<std::uint64_t>(trial_id),
                                               k_stage_orthogonal));

  TrialRecord rec;
  rec.trial_id = trial_id;

  MomentSampleSet ms;
  ms.d = cfg.d;
  ms.e_u.reserve(static_cast<std::size_t>(cfg.n_ops));
  ms.e_o.reserve(static_cast<std::size_t>(cfg.n_ops));

  if (cfg.exact_expectations) {
    ms.provenance = "exact";
    for (int l = 0; l < cfg.n_ops; ++l) {
      const Matrix u = sample_haar_unitary(cfg.d, u_rs);
      const Matrix o = sample_haar_orthogonal(cfg.d, o_rs);
      const auto projectors = projection_set(u, o, obs);
      double p[5];
      for (int k = 0; k < 5; ++k) {
        p[k] = state->product_projector_expectation(projectors[k].left, projectors[k].right);
      }
      ms.e_u.push_back(p[0]);
      ms.e_o.push_back(compose_e_o(p[1], p[2], p[3], p[4]));
      rec.projector_evals += 5;
    }
  } else {
    const std::int64_t m = resolved_shots_per_projector(cfg);
    ms.provenance = "shots:" + std::to_string(m);
    ShotConfig shot_cfg{
        m,
        RandomStream(cfg.seed, derive_stream_id(cell_index, static_cast<std::uint64_t>(trial_id),
                                                k_stage_shots)),
        ShotLedger{}};
    for (int l = 0; l < cfg.n_ops; ++l) {
      const Matrix u = sample_haar_unitary(cfg.d, u_rs);
      const Matrix o = sample_haar_orthogonal(cfg.d, o_rs);
      ms.e_u.push_back(measured_e_u(*state, u, obs, shot_cfg));
      ms.e_o.push_back(measured_e_o(*state, o, obs, shot_cfg));
    }
    rec.projector_evals = static_cast<std::int64_t>(shot_cfg.ledger.projectors);
    rec.shots_used = static_cast<std::int64_t>(shot_cfg.ledger.shots);
  }

  const FidelitySampleSet fs = per_sample_fidelities(ms);
  RandomStream boot_rs(cfg.seed, derive_stream_id(cell_index, static_cast<std::uint64_t>(trial_id),
                                                  k_stage_bootstrap));
  const SnEstimate est =
      estimate_sn(fs, cfg.level, cfg.method, cfg.bootstrap_resamples, &boot_rs);

  rec.f_lower = est.f_lower;
  rec.f_upper = est.f_upper;
  rec.sn_estimate = est.sn_lower;
  rec.sn_fid = sn_fidelity_witness(*state);
  if (cfg.record_samples) {
    rec.samples = std::move(ms);
  } else {
    rec.samples.d = cfg.d;
    rec.samples.provenance = ms.provenance;
  }
  return rec;
}

namespace {

struct TrialSlot {
  int est = 0;
  int fid = 0;
  double f_lower = 0.0;
  std::int64_t projector_evals = 0;
  std::int64_t shots = 0;
  bool failed = false;
  std::string error;
};

CellResult aggregate_cell(const ExperimentConfig& cell_cfg, const TrialSlot* slots,
                          int n_trials) {
  CellResult cell;
  cell.v = cell_cfg.v;
  cell.n_ops = cell_cfg.n_ops;
  cell.n_iter = n_trials;
  cell.sn_histogram.assign(static_cast<std::size_t>(cell_cfg.d) + 1, 0);

  bool any_ok = false;
  double est_sum = 0.0;
  double f_lower_sum = 0.0;
  for (int t = 0; t < n_trials; ++t) {
    const TrialSlot& slot = slots[t];
    if (slot.failed) {
      ++cell.failed_trials;
      if (cell.first_error.empty()) cell.first_error = slot.error;
      continue;
    }
    const int diff = slot.fid - slot.est;
    if (!any_ok) {
      cell.mu_est_min = cell.mu_est_max = slot.est;
      cell.e_max = cell.e_min = diff;
      cell.projector_evals_per_trial = slot.projector_evals;
      cell.shots_per_trial = slot.shots;
      any_ok = true;
    } else {
      cell.mu_est_min = std::min(cell.mu_est_min, slot.est);
      cell.mu_est_max = std::max(cell.mu_est_max, slot.est);
      cell.e_max = std::max(cell.e_max, diff);
      cell.e_min = std::min(cell.e_min, diff);
    }
    if (slot.est > slot.fid) ++cell.violations;
    if (slot.est >= 0 && slot.est <= cell_cfg.d) {
      ++cell.sn_histogram[static_cast<std::size_t>(slot.est)];
    }
    est_sum += slot.est;
    f_lower_sum += slot.f_lower;
  }
  const int ok = n_trials - cell.failed_trials;
  if (ok > 0) {
    cell.mu_est_mean = est_sum / ok;
    cell.mean_f_lower = f_lower_sum / ok;
  }
  return cell;
}

void attach_baselines(CellResult& cell, const ExperimentConfig& cell_cfg,
                      const StateModel& state, const MubTriple& mubs) {
  cell.sn_fid = sn_fidelity_witness(state);
  cell.has_baselines = true;
  cell.mub_valid = mubs.valid;
  cell.mub_max_deviation = mubs.max_deviation;
  if (mubs.valid) {
    const CriterionResult mub = mub_criterion(state, mubs);
    cell.s3d = mub.statistic;
    cell.mub_bound = mub.sn_bound;
    cell.mub_projections = mub.projection_count;
  }
  const CriterionResult second = second_moment_criterion(state);
  cell.corr_norm_sq = second.statistic;
  cell.second_moment_bound = second.sn_bound;
  cell.trace_distance_lb =
      trace_distance_lower_bound(exact_r(state), exact_q(state), cell_cfg.d);
}

}  // namespace

SweepReport run_sweep(const ExperimentConfig& cfg, const SweepGrid& grid) {
  validate_config(cfg);
  if (grid.v_values.empty() || grid.n_ops_values.empty()) {
    throw std::invalid_argument("sweep grid must be nonempty");
  }

  const std::size_t n_n = grid.n_ops_values.size();
  const std::size_t n_cells = grid.v_values.size() * n_n;
  const auto n_trials = static_cast<std::size_t>(cfg.n_iter);
  const bool deterministic = family_is_deterministic(cfg.family);

  std::vector<ExperimentConfig> cell_cfgs;
  cell_cfgs.reserve(n_cells);
  std::vector<StateModel> cell_states(deterministic ? n_cells : 0);
  for (std::size_t ci = 0; ci < n_cells; ++ci) {
    ExperimentConfig c = cfg;
    c.v = grid.v_values[ci / n_n];
    c.n_ops = grid.n_ops_values[ci % n_n];
    validate_config(c);
    if (deterministic) cell_states[ci] = make_state(c);
    cell_cfgs.push_back(std::move(c));
  }

  std::vector<TrialSlot> slots(n_cells * n_trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t task = next.fetch_add(1, std::memory_order_relaxed);
      if (task >= slots.size()) return;
      const std::size_t ci = task / n_trials;
      const int trial = static_cast<int>(task % n_trials);
      TrialSlot& slot = slots[task];
      try {
        const StateModel* shared = deterministic ? &cell_states[ci] : nullptr;
        const TrialRecord rec = run_trial(cell_cfgs[ci], ci, trial, shared);
        slot.est = rec.sn_estimate;
        slot.fid = rec.sn_fid;
        slot.f_lower = rec.f_lower;
        slot.projector_evals = rec.projector_evals;
        slot.shots = rec.shots_used;
      } catch (const std::exception& e) {
        slot.failed = true;
        slot.error = e.what();
      }
    }
  };

  const auto n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(resolved_threads(cfg)), slots.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SweepReport report;
  report.config = cfg;
  report.grid = grid;
  report.cells.reserve(n_cells);

  // Baseline criteria are deterministic per cell, so the basis triple is
  // built once for the sweep's fixed dimension.
  MubTriple mubs;
  const bool want_baselines = deterministic && cfg.baselines_enabled;
  if (want_baselines) mubs = build_3mubs(cfg.d, cfg.mub_alpha, cfg.mub_printed_phase);

  for (std::size_t ci = 0; ci < n_cells; ++ci) {
    CellResult cell =
        aggregate_cell(cell_cfgs[ci], slots.data() + ci * n_trials, cfg.n_iter);
    if (want_baselines) attach_baselines(cell, cell_cfgs[ci], cell_states[ci], mubs);
    report.cells.push_back(std::move(cell));
  }
  return report;
}

namespace {

void put_optional(std::ostream& os, double value) {
  if (!std::isnan(value)) os << value;
}

ordered_json config_to_json(const ExperimentConfig& c) {
  return ordered_json{{"d", c.d},
                      {"family", to_string(c.family)},
                      {"v", c.v},
                      {"beta", c.beta},
                      {"schmidt_rank", c.schmidt_rank},
                      {"n_ops", c.n_ops},
                      {"level", c.level},
                      {"method", to_string(c.method)},
                      {"bootstrap_resamples", c.bootstrap_resamples},
                      {"exact_expectations", c.exact_expectations},
                      {"shots_per_projector", c.shots_per_projector},
                      {"n_iter", c.n_iter},
                      {"seed", c.seed},
                      {"mub_alpha", c.mub_alpha},
                      {"mub_printed_phase", c.mub_printed_phase},
                      {"baselines_enabled", c.baselines_enabled},
                      {"record_samples", c.record_samples},
                      {"threads", c.threads}};
}

ExperimentConfig config_from_json(const ordered_json& j) {
  ExperimentConfig c;
  c.d = j.at("d").get<int>();
  c.family = state_family_from_string(j.at("family").get<std::string>());
  c.v = j.at("v").get<double>();
  c.beta = j.at("beta").get<double>();
  c.schmidt_rank = j.at("schmidt_rank").get<int>();
  c.n_ops = j.at("n_ops").get<int>();
  c.level = j.at("level").get<double>();
  c.method = interval_method_from_string(j.at("method").get<std::string>());
  c.bootstrap_resamples = j.at("bootstrap_resamples").get<int>();
  c.exact_expectations = j.at("exact_expectations").get<bool>();
  c.shots_per_projector = j.at("shots_per_projector").get<std::int64_t>();
  c.n_iter = j.at("n_iter").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.mub_alpha = j.at("mub_alpha").get<double>();
  c.mub_printed_phase = j.at("mub_printed_phase").get<bool>();
  c.baselines_enabled = j.at("baselines_enabled").get<bool>();
  c.record_samples = j.at("record_samples").get<bool>();
  c.threads = j.at("threads").get<int>();
  return c;
}

double optional_from_json(const ordered_json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

ordered_json cell_to_json(const CellResult& cell) {
  return ordered_json{{"v", cell.v},
                      {"n_ops", cell.n_ops},
                      {"n_iter", cell.n_iter},
                      {"sn_fid", cell.sn_fid},
                      {"mu_est_min", cell.mu_est_min},
                      {"mu_est_max", cell.mu_est_max},
                      {"mu_est_mean", cell.mu_est_mean},
                      {"e_max", cell.e_max},
                      {"e_min", cell.e_min},
                      {"violations", cell.violations},
                      {"mean_f_lower", cell.mean_f_lower},
                      {"sn_histogram", cell.sn_histogram},
                      {"projector_evals_per_trial", cell.projector_evals_per_trial},
                      {"shots_per_trial", cell.shots_per_trial},
                      {"has_baselines", cell.has_baselines},
                      {"mub_valid", cell.mub_valid},
                      {"mub_max_deviation", cell.mub_max_deviation},
                      {"s3d", cell.s3d},
                      {"mub_bound", cell.mub_bound},
                      {"mub_projections", cell.mub_projections},
                      {"corr_norm_sq", cell.corr_norm_sq},
                      {"second_moment_bound", cell.second_moment_bound},
                      {"trace_distance_lb", cell.trace_distance_lb},
                      {"failed_trials", cell.failed_trials},
                      {"first_error", cell.first_error}};
}

CellResult cell_from_json(const ordered_json& j) {
  CellResult cell;
  cell.v = j.at("v").get<double>();
  cell.n_ops = j.at("n_ops").get<int>();
  cell.n_iter = j.at("n_iter").get<int>();
  cell.sn_fid = j.at("sn_fid").get<int>();
  cell.mu_est_min = j.at("mu_est_min").get<int>();
  cell.mu_est_max = j.at("mu_est_max").get<int>();
  cell.mu_est_mean = j.at("mu_est_mean").get<double>();
  cell.e_max = j.at("e_max").get<int>();
  cell.e_min = j.at("e_min").get<int>();
  cell.violations = j.at("violations").get<int>();
  cell.mean_f_lower = j.at("mean_f_lower").get<double>();
  cell.sn_histogram = j.at("sn_histogram").get<std::vector<std::int64_t>>();
  cell.projector_evals_per_trial = j.at("projector_evals_per_trial").get<std::int64_t>();
  cell.shots_per_trial = j.at("shots_per_trial").get<std::int64_t>();
  cell.has_baselines = j.at("has_baselines").get<bool>();
  cell.mub_valid = j.at("mub_valid").get<bool>();
  cell.mub_max_deviation = j.at("mub_max_deviation").get<double>();
  cell.s3d = optional_from_json(j.at("s3d"));
  cell.mub_bound = j.at("mub_bound").get<int>();
  cell.mub_projections = j.at("mub_projections").get<std::int64_t>();
  cell.corr_norm_sq = optional_from_json(j.at("corr_norm_sq"));
  cell.second_moment_bound = j.at("second_moment_bound").get<int>();
  cell.trace_distance_lb = optional_from_json(j.at("trace_distance_lb"));
  cell.failed_trials = j.at("failed_trials").get<int>();
  cell.first_error = j.at("first_error").get<std::string>();
  return cell;
}

}  // namespace

void write_report_csv(std::ostream& os, const SweepReport& report) {
  const auto& cfg = report.config;
  os << "# sncert-sweep-csv v1\n";
  os << "d,family,v,n_ops,n_iter,level,method,mode,mu_fid,mu_est_min,mu_est_max,"
        "mu_est_mean,e_max,e_min,violations,mean_f_lower,projector_evals_per_trial,"
        "shots_per_trial,has_baselines,mub_valid,s3d,mub_bound,mub_projections,"
        "corr_norm_sq,second_moment_bound,trace_distance_lb,failed_trials\n";
  os << std::setprecision(17);
  const std::string mode = cfg.exact_expectations
                               ? "exact"
                               : "shots:" + std::to_string(resolved_shots_per_projector(cfg));
  for (const auto& cell : report.cells) {
    os << cfg.d << ',' << to_string(cfg.family) << ',' << cell.v << ',' << cell.n_ops << ','
       << cell.n_iter << ',' << cfg.level << ',' << to_string(cfg.method) << ',' << mode << ','
       << cell.sn_fid << ',' << cell.mu_est_min << ',' << cell.mu_est_max << ','
       << cell.mu_est_mean << ',' << cell.e_max << ',' << cell.e_min << ','
       << cell.violations << ',' << cell.mean_f_lower << ','
       << cell.projector_evals_per_trial << ',' << cell.shots_per_trial << ','
       << (cell.has_baselines ? 1 : 0) << ',' << (cell.mub_valid ? 1 : 0) << ',';
    put_optional(os, cell.s3d);
    os << ',' << cell.mub_bound << ',' << cell.mub_projections << ',';
    put_optional(os, cell.corr_norm_sq);
    os << ',' << cell.second_moment_bound << ',';
    put_optional(os, cell.trace_distance_lb);
    os << ',' << cell.failed_trials << '\n';
  }
}

void write_report_json(std::ostream& os, const SweepReport& report) {
  ordered_json j;
  j["schema"] = "sncert-sweep-json v1";
  j["config"] = config_to_json(report.config);
  j["grid"] = ordered_json{{"v", report.grid.v_values}, {"n_ops", report.grid.n_ops_values}};
  ordered_json cells = ordered_json::array();
  for (const auto& cell : report.cells) cells.push_back(cell_to_json(cell));
  j["cells"] = std::move(cells);
  os << j.dump(2) << '\n';
}

SweepReport read_report_json(std::istream& is) {
  ordered_json j;
  is >> j;
  if (j.at("schema").get<std::string>() != "sncert-sweep-json v1") {
    throw std::runtime_error("unsupported report schema: " +
                             j.at("schema").get<std::string>());
  }
  SweepReport report;
  report.config = config_from_json(j.at("config"));
  report.grid.v_values = j.at("grid").at("v").get<std::vector<double>>();
  report.grid.n_ops_values = j.at("grid").at("n_ops").get<std::vector<int>>();
  for (const auto& cell : j.at("cells")) report.cells.push_back(cell_from_json(cell));
  return report;
}

std::string write_report_files(const SweepReport& report, const std::string& out_path,
                               const std::string& format) {
  {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    if (format == "csv") {
      write_report_csv(out, report);
    } else if (format == "json") {
      write_report_json(out, report);
    } else {
      throw std::invalid_argument("unknown report format: " + format);
    }
    out.flush();
    if (!out) throw std::runtime_error("failed writing output file: " + out_path);
  }

  const std::string meta_path = out_path + ".meta.json";
  std::ofstream meta(meta_path);
  if (!meta) throw std::runtime_error("cannot open metadata file: " + meta_path);

  char stamp[32] = {0};
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);

  ordered_json m;
  m["schema"] = "sncert-meta v1";
  m["version"] = k_version;
  m["generated_at"] = stamp;
  m["output"] = out_path;
  m["format"] = format;
  m["config"] = config_to_json(report.config);
  m["grid"] =
      ordered_json{{"v", report.grid.v_values}, {"n_ops", report.grid.n_ops_values}};
  m["cells"] = report.cells.size();
  meta << m.dump(2) << '\n';
  meta.flush();
  if (!meta) throw std::runtime_error("failed writing metadata file: " + meta_path);
  return meta_path;
}

}  // namespace sncert
