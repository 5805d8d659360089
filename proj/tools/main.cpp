#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "selftest.hpp"
#include "sncert/baselines.hpp"
#include "sncert/estimator.hpp"
#include "sncert/harness.hpp"
#include "sncert/moments.hpp"
#include "sncert/random_stream.hpp"

namespace {

using namespace sncert;

struct CliOptions {
  ExperimentConfig cfg;
  std::string state = "isotropic";
  std::string method = "t";
  std::string bootstrap_variant = "percentile";
  std::string shots = "exact";
  std::string out;
  std::string format = "csv";
  std::string v_grid;
  std::string n_ops_grid;
  std::string moments_out;
  std::string in_path;
};

void add_common_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--d", o.cfg.d, "Local dimension d")->check(CLI::Range(2, 4096));
  cmd->add_option("--state", o.state,
                  "State family: max-entangled, isotropic, partial-entangled, thermal, "
                  "random-noise, random-hs");
  cmd->add_option("--v", o.cfg.v, "Visibility v in [0, 1]");
  cmd->add_option("--beta", o.cfg.beta, "Thermal Schmidt-amplitude decay rate");
  cmd->add_option("--schmidt-rank", o.cfg.schmidt_rank,
                  "Schmidt rank of the partial-entangled family");
  cmd->add_option("--n-ops", o.cfg.n_ops, "Random unitary/orthogonal pairs N per trial");
  cmd->add_option("--cl", o.cfg.level, "Confidence level, e.g. 0.999");
  cmd->add_option("--method", o.method, "Interval method")
      ->check(CLI::IsMember({"t", "bootstrap"}));
  cmd->add_option("--bootstrap-b", o.cfg.bootstrap_resamples, "Bootstrap resamples B");
  cmd->add_option("--bootstrap-variant", o.bootstrap_variant,
                  "Bootstrap interval construction")
      ->check(CLI::IsMember({"percentile", "literal"}));
  cmd->add_option("--shots", o.shots,
                  "Expectation mode: 'exact', 'auto' (M = 100 d), or a shot count M");
  cmd->add_option("--iters", o.cfg.n_iter, "Independent trials per grid cell");
  cmd->add_option("--seed", o.cfg.seed, "Base RNG seed")->envname("SNCERT_SEED");
  cmd->add_option("--alpha-mub", o.cfg.mub_alpha, "Quadratic phase parameter of the basis triple");
  cmd->add_flag("--mub-printed-phase", o.cfg.mub_printed_phase,
                "Use the a*j/(2d) linear-phase basis variant (flagged invalid for most d)");
  cmd->add_option("--out", o.out, "Output file path (stdout when omitted)");
  cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", o.cfg.threads, "Worker threads (0 = all hardware threads)")
      ->check(CLI::Range(0, 1024));
}

void resolve_options(CliOptions& o) {
  o.cfg.family = state_family_from_string(o.state);
  if (o.method == "t") {
    o.cfg.method = IntervalMethod::t;
  } else {
    o.cfg.method = o.bootstrap_variant == "literal" ? IntervalMethod::bootstrap_literal
                                                    : IntervalMethod::bootstrap_percentile;
  }
  if (o.shots == "exact") {
    o.cfg.exact_expectations = true;
    o.cfg.shots_per_projector = 0;
  } else if (o.shots == "auto") {
    o.cfg.exact_expectations = false;
    o.cfg.shots_per_projector = 0;
  } else {
    std::size_t pos = 0;
    const long long m = std::stoll(o.shots, &pos);
    if (pos != o.shots.size() || m <= 0) {
      throw CLI::ValidationError("--shots", "expected 'exact', 'auto', or a positive count");
    }
    o.cfg.exact_expectations = false;
    o.cfg.shots_per_projector = m;
  }
  validate_config(o.cfg);
}

// Grid syntax: comma list ("0.5,0.6,0.7") or range "start:stop:step"
// (stop inclusive up to a half-step tolerance).
std::vector<double> parse_double_grid(const std::string& text) {
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) {
      throw CLI::ValidationError("grid", "range form is start:stop:step");
    }
    const double start = std::stod(text.substr(0, c1));
    const double stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(text.substr(c2 + 1));
    if (step <= 0.0 || stop < start) {
      throw CLI::ValidationError("grid", "need step > 0 and stop >= start");
    }
    for (double x = start; x <= stop + step / 2; x += step) values.push_back(x);
    return values;
  }
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const auto end = text.find(',', begin);
    const std::string tok =
        text.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
    if (!tok.empty()) values.push_back(std::stod(tok));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  if (values.empty()) throw CLI::ValidationError("grid", "empty grid");
  return values;
}

std::vector<int> parse_int_grid(const std::string& text) {
  std::vector<int> values;
  for (double x : parse_double_grid(text)) values.push_back(static_cast<int>(std::lround(x)));
  return values;
}

void print_trial(std::ostream& os, const ExperimentConfig& cfg, const TrialRecord& rec) {
  os << std::setprecision(10);
  os << "state          " << to_string(cfg.family) << " (d=" << cfg.d << ")\n";
  os << "mode           "
     << (cfg.exact_expectations
             ? std::string("exact expectations")
             : "shots, M=" + std::to_string(resolved_shots_per_projector(cfg)))
     << "\n";
  os << "rotations      N=" << cfg.n_ops << "\n";
  os << "interval       [" << rec.f_lower << ", " << rec.f_upper << "] at "
     << cfg.level * 100 << "% (" << to_string(cfg.method) << ")\n";
  os << "sn_estimate    " << rec.sn_estimate << "\n";
  os << "sn_fidelity    " << rec.sn_fid << "\n";
  os << "projectors     " << rec.projector_evals << "\n";
  os << "shots          " << rec.shots_used << "\n";
}

int cmd_trial(CliOptions& o) {
  resolve_options(o);
  o.cfg.record_samples = true;
  const TrialRecord rec = run_trial(o.cfg, 0, 0);
  if (!o.moments_out.empty()) {
    std::ofstream ms_out(o.moments_out);
    if (!ms_out) throw std::runtime_error("cannot open output file: " + o.moments_out);
    write_moments_csv(ms_out, rec.samples);
  }
  if (o.out.empty()) {
    print_trial(std::cout, o.cfg, rec);
  } else {
    std::ofstream out(o.out);
    if (!out) throw std::runtime_error("cannot open output file: " + o.out);
    print_trial(out, o.cfg, rec);
  }
  return 0;
}

int cmd_sweep(CliOptions& o) {
  resolve_options(o);
  SweepGrid grid;
  grid.v_values = o.v_grid.empty() ? std::vector<double>{o.cfg.v} : parse_double_grid(o.v_grid);
  grid.n_ops_values =
      o.n_ops_grid.empty() ? std::vector<int>{o.cfg.n_ops} : parse_int_grid(o.n_ops_grid);

  const SweepReport report = run_sweep(o.cfg, grid);
  if (o.out.empty()) {
    if (o.format == "csv") {
      write_report_csv(std::cout, report);
    } else {
      write_report_json(std::cout, report);
    }
  } else {
    const std::string meta = write_report_files(report, o.out, o.format);
    std::cout << "wrote " << o.out << "\nwrote " << meta << "\n";
  }
  return 0;
}

int cmd_baselines(CliOptions& o) {
  resolve_options(o);
  if (!family_is_deterministic(o.cfg.family)) {
    throw std::runtime_error(
        "baseline criteria need a deterministic state family (got " + o.state + ")");
  }
  const StateModel rho = make_state(o.cfg);
  const int d = o.cfg.d;

  std::cout << std::setprecision(10);
  std::cout << "state                 " << to_string(o.cfg.family) << " (d=" << d << ")\n";
  std::cout << "sn_fidelity_witness   " << sn_fidelity_witness(rho) << "\n";

  const MubTriple mubs = build_3mubs(d, o.cfg.mub_alpha, o.cfg.mub_printed_phase);
  if (mubs.valid) {
    const CriterionResult mub = mub_criterion(rho, mubs);
    std::cout << "3-mubs                S=" << mub.statistic << ", bound " << mub.sn_bound
              << ", projections " << mub.projection_count << "\n";
  } else {
    std::cout << "3-mubs                FLAGGED: construction failed validation "
              << "(max deviation " << mubs.max_deviation << "); no bound certified\n";
  }

  const CriterionResult second = second_moment_criterion(rho);
  std::cout << "second-moment         |T|^2=" << second.statistic << ", bound "
            << second.sn_bound << "\n";
  std::cout << "trace-distance bound  "
            << trace_distance_lower_bound(exact_r(rho), exact_q(rho), d) << "\n";
  return mubs.valid ? 0 : 2;
}

int cmd_postprocess(CliOptions& o) {
  resolve_options(o);
  std::ifstream in(o.in_path);
  if (!in) throw std::runtime_error("cannot open input file: " + o.in_path);
  const MomentSampleSet ms = read_moments_csv(in, o.cfg.d);
  const FidelitySampleSet fs = per_sample_fidelities(ms);
  RandomStream boot_rs(o.cfg.seed, derive_stream_id(0, 0, 4));
  const SnEstimate est =
      estimate_sn(fs, o.cfg.level, o.cfg.method, o.cfg.bootstrap_resamples, &boot_rs);

  std::cout << std::setprecision(10);
  std::cout << "samples        " << est.samples << " (provenance " << ms.provenance << ")\n";
  std::cout << "interval       [" << est.f_lower << ", " << est.f_upper << "] at "
            << est.level * 100 << "% (" << to_string(est.method) << ")\n";
  std::cout << "sn_estimate    " << est.sn_lower << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schmidt-number certification via local randomized projections"};
  app.require_subcommand(1);
  // Options live on the subcommands, so config files address them through
  // INI sections: [trial] / [sweep] / [baselines] / [postprocess].
  app.set_config("--config", "", "Read options from an INI file (sections per subcommand)");

  CliOptions trial_opt, sweep_opt, base_opt, post_opt;

  CLI::App* trial = app.add_subcommand("trial", "Run one trial and print its record");
  add_common_flags(trial, trial_opt);
  trial->add_option("--moments-out", trial_opt.moments_out,
                    "Write the per-rotation moment samples as CSV");

  CLI::App* sweep = app.add_subcommand("sweep", "Run a (v, N) grid of repeated trials");
  add_common_flags(sweep, sweep_opt);
  sweep->add_option("--v-grid", sweep_opt.v_grid,
                    "Visibility grid: comma list or start:stop:step");
  sweep->add_option("--n-ops-grid", sweep_opt.n_ops_grid,
                    "Rotation-count grid: comma list or start:stop:step");

  CLI::App* baselines = app.add_subcommand(
      "baselines", "Evaluate the comparison criteria for a deterministic state");
  add_common_flags(baselines, base_opt);

  CLI::App* post = app.add_subcommand(
      "postprocess", "Estimate from an existing moment-sample CSV");
  add_common_flags(post, post_opt);
  post->add_option("--in", post_opt.in_path, "Moment-sample CSV to ingest")->required();

  CLI::App* selftest =
      app.add_subcommand("selftest", "Run the built-in oracle-equivalence checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (trial->parsed()) return cmd_trial(trial_opt);
    if (sweep->parsed()) return cmd_sweep(sweep_opt);
    if (baselines->parsed()) return cmd_baselines(base_opt);
    if (post->parsed()) return cmd_postprocess(post_opt);
    if (selftest->parsed()) return run_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
