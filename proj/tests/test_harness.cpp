#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "sncert/harness.hpp"

using namespace sncert;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.d = 4;
  cfg.family = StateFamily::isotropic;
  cfg.v = 0.9;
  cfg.n_ops = 6;
  cfg.level = 0.99;
  cfg.n_iter = 8;
  cfg.seed = 99;
  return cfg;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("family names round-trip and classify determinism") {
    for (StateFamily f : {StateFamily::max_entangled, StateFamily::isotropic,
                          StateFamily::partial_entangled, StateFamily::thermal,
                          StateFamily::random_noise, StateFamily::random_hs}) {
      CHECK(state_family_from_string(to_string(f)) == f);
    }
    CHECK(family_is_deterministic(StateFamily::isotropic));
    CHECK(family_is_deterministic(StateFamily::thermal));
    CHECK(!family_is_deterministic(StateFamily::random_noise));
    CHECK(!family_is_deterministic(StateFamily::random_hs));
    CHECK_THROWS_AS((void)state_family_from_string("ghz"), std::invalid_argument);
  }

  TEST_CASE("config validation rejects each out-of-range field") {
    auto bad = [](auto mutate) {
      ExperimentConfig cfg;
      mutate(cfg);
      CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    };
    bad([](ExperimentConfig& c) { c.d = 1; });
    bad([](ExperimentConfig& c) { c.n_ops = 1; });
    bad([](ExperimentConfig& c) { c.level = 0.0; });
    bad([](ExperimentConfig& c) { c.level = 1.0; });
    bad([](ExperimentConfig& c) { c.bootstrap_resamples = 1; });
    bad([](ExperimentConfig& c) { c.n_iter = 0; });
    bad([](ExperimentConfig& c) { c.shots_per_projector = -1; });
    bad([](ExperimentConfig& c) { c.threads = -1; });
    bad([](ExperimentConfig& c) { c.v = 1.2; });
    bad([](ExperimentConfig& c) { c.beta = -0.5; c.family = StateFamily::thermal; });
    bad([](ExperimentConfig& c) { c.schmidt_rank = 0; c.family = StateFamily::partial_entangled; });
    ExperimentConfig ok;
    CHECK_NOTHROW(validate_config(ok));
  }

  TEST_CASE("shot and thread resolution apply the documented defaults") {
    ExperimentConfig cfg = small_config();
    CHECK(resolved_shots_per_projector(cfg) == 0);  // exact mode
    cfg.exact_expectations = false;
    CHECK(resolved_shots_per_projector(cfg) == 100 * cfg.d);
    cfg.shots_per_projector = 37;
    CHECK(resolved_shots_per_projector(cfg) == 37);
    cfg.threads = 3;
    CHECK(resolved_threads(cfg) == 3);
    cfg.threads = 0;
    CHECK(resolved_threads(cfg) >= 1);
  }

  TEST_CASE("make_state needs a stream only for random families") {
    ExperimentConfig cfg = small_config();
    CHECK_NOTHROW((void)make_state(cfg));
    cfg.family = StateFamily::random_hs;
    CHECK_THROWS_AS((void)make_state(cfg), std::invalid_argument);
    RandomStream rs(cfg.seed, 0);
    CHECK_NOTHROW((void)make_state(cfg, &rs));
  }

  TEST_CASE("trials are bit-identical under replay and count resources") {
    const ExperimentConfig cfg = small_config();
    const TrialRecord a = run_trial(cfg, 0, 3);
    const TrialRecord b = run_trial(cfg, 0, 3);
    CHECK(a.f_lower == b.f_lower);
    CHECK(a.f_upper == b.f_upper);
    CHECK(a.sn_estimate == b.sn_estimate);
    CHECK(a.projector_evals == 5 * cfg.n_ops);
    CHECK(a.shots_used == 0);

    ExperimentConfig shots_cfg = cfg;
    shots_cfg.exact_expectations = false;
    shots_cfg.shots_per_projector = 50;
    const TrialRecord c = run_trial(shots_cfg, 0, 3);
    CHECK(c.projector_evals == 5 * cfg.n_ops);
    CHECK(c.shots_used == 5 * cfg.n_ops * 50);

    // Different trial ids draw different rotations.
    const TrialRecord d = run_trial(cfg, 0, 4);
    CHECK(a.f_lower != d.f_lower);
  }

  TEST_CASE("zero-variance state gives a width-zero interval and bound 1") {
    ExperimentConfig cfg = small_config();
    cfg.family = StateFamily::isotropic;
    cfg.v = 0.0;  // maximally mixed: E_U = 1/d^2 and E_O = 0 for every rotation
    const TrialRecord r = run_trial(cfg, 0, 0);
    CHECK(r.f_lower == doctest::Approx(r.f_upper).epsilon(1e-12));
    CHECK(r.f_lower == doctest::Approx(1.0 / (cfg.d * double(cfg.d))).epsilon(1e-10));
    CHECK(r.sn_estimate == 1);
    CHECK(r.sn_fid == 1);
  }

  TEST_CASE("recorded samples feed the estimator reproducibly") {
    ExperimentConfig cfg = small_config();
    cfg.record_samples = true;
    const TrialRecord r = run_trial(cfg, 2, 5);
    REQUIRE(r.samples.size() == std::size_t(cfg.n_ops));
    CHECK(r.samples.d == cfg.d);
    CHECK(r.samples.provenance == "exact");
    const FidelitySampleSet fs = per_sample_fidelities(r.samples);
    const SnEstimate est = estimate_sn(fs, cfg.level, IntervalMethod::t);
    CHECK(est.f_lower == r.f_lower);
    CHECK(est.f_upper == r.f_upper);
    CHECK(est.sn_lower == r.sn_estimate);
  }

  TEST_CASE("a one-cell sweep aggregates exactly the trials it ran") {
    ExperimentConfig cfg = small_config();
    const SweepGrid grid{{cfg.v}, {cfg.n_ops}};
    const SweepReport report = run_sweep(cfg, grid);
    REQUIRE(report.cells.size() == 1);
    const CellResult& cell = report.cells[0];
    CHECK(cell.failed_trials == 0);
    CHECK(cell.n_iter == cfg.n_iter);

    int mn = 1 << 30, mx = 0, viol = 0;
    double mean_fl = 0.0, mean_mu = 0.0;
    std::vector<std::int64_t> hist(std::size_t(cfg.d) + 1, 0);
    for (int t = 0; t < cfg.n_iter; ++t) {
      const TrialRecord r = run_trial(cfg, 0, t);
      mn = std::min(mn, r.sn_estimate);
      mx = std::max(mx, r.sn_estimate);
      viol += (r.sn_estimate > r.sn_fid) ? 1 : 0;
      mean_fl += r.f_lower;
      mean_mu += r.sn_estimate;
      ++hist[std::size_t(r.sn_estimate)];
    }
    mean_fl /= cfg.n_iter;
    mean_mu /= cfg.n_iter;
    CHECK(cell.mu_est_min == mn);
    CHECK(cell.mu_est_max == mx);
    CHECK(cell.mu_est_mean == doctest::Approx(mean_mu).epsilon(1e-12));
    CHECK(cell.violations == viol);
    CHECK(cell.mean_f_lower == doctest::Approx(mean_fl).epsilon(1e-12));
    REQUIRE(cell.sn_histogram.size() == hist.size());
    for (std::size_t i = 0; i < hist.size(); ++i) CHECK(cell.sn_histogram[i] == hist[i]);

    CHECK(cell.has_baselines);
    CHECK(cell.mub_valid);
    CHECK(cell.sn_fid == sn_exact_isotropic(cfg.d, cfg.v));
    CHECK(cell.mub_projections == 3 * cfg.d);
    CHECK(std::isfinite(cell.s3d));
    CHECK(std::isfinite(cell.corr_norm_sq));
    CHECK(std::isfinite(cell.trace_distance_lb));
  }

  TEST_CASE("sweep results are independent of the thread count") {
    ExperimentConfig cfg = small_config();
    cfg.n_iter = 6;
    const SweepGrid grid{{0.5, 0.9}, {4, 6}};
    cfg.threads = 1;
    SweepReport serial = run_sweep(cfg, grid);
    cfg.threads = 4;
    SweepReport parallel = run_sweep(cfg, grid);
    REQUIRE(serial.cells.size() == 4);
    REQUIRE(parallel.cells.size() == 4);
    // The worker count is provenance, not physics: normalize it so the
    // serialized comparison checks only the computed results.
    serial.config.threads = parallel.config.threads = 0;
    std::ostringstream s1, s2;
    write_report_json(s1, serial);
    write_report_json(s2, parallel);
    CHECK(s1.str() == s2.str());
  }

  TEST_CASE("random families disable cell-level baselines but stay deterministic") {
    ExperimentConfig cfg = small_config();
    cfg.d = 3;
    cfg.family = StateFamily::random_hs;
    cfg.n_iter = 4;
    const SweepGrid grid{{0.0}, {4}};
    cfg.threads = 1;
    SweepReport a = run_sweep(cfg, grid);
    cfg.threads = 2;
    SweepReport b = run_sweep(cfg, grid);
    REQUIRE(a.cells.size() == 1);
    CHECK(!a.cells[0].has_baselines);
    CHECK(a.cells[0].sn_fid == 0);
    a.config.threads = b.config.threads = 0;
    std::ostringstream s1, s2;
    write_report_json(s1, a);
    write_report_json(s2, b);
    CHECK(s1.str() == s2.str());
  }

  TEST_CASE("CSV output carries the schema line and the fixed header") {
    ExperimentConfig cfg = small_config();
    cfg.n_iter = 2;
    const SweepReport report = run_sweep(cfg, SweepGrid{{cfg.v}, {cfg.n_ops}});
    std::ostringstream os;
    write_report_csv(os, report);
    std::istringstream is(os.str());
    std::string schema, header, row;
    REQUIRE(std::getline(is, schema));
    REQUIRE(std::getline(is, header));
    REQUIRE(std::getline(is, row));
    CHECK(schema == "# sncert-sweep-csv v1");
    CHECK(header ==
          "d,family,v,n_ops,n_iter,level,method,mode,mu_fid,mu_est_min,mu_est_max,mu_est_mean,"
          "e_max,e_min,violations,mean_f_lower,projector_evals_per_trial,shots_per_trial,"
          "has_baselines,mub_valid,s3d,mub_bound,mub_projections,corr_norm_sq,"
          "second_moment_bound,trace_distance_lb,failed_trials");
    CHECK(row.substr(0, 2) == "4,");
    CHECK(row.find("isotropic") != std::string::npos);
  }

  TEST_CASE("JSON reports round-trip to identical bytes") {
    ExperimentConfig cfg = small_config();
    cfg.n_iter = 3;
    const SweepReport report = run_sweep(cfg, SweepGrid{{0.2, 0.9}, {4}});
    std::ostringstream first;
    write_report_json(first, report);
    std::istringstream is(first.str());
    const SweepReport back = read_report_json(is);
    std::ostringstream second;
    write_report_json(second, back);
    CHECK(first.str() == second.str());

    std::istringstream bad(R"({"schema":"sncert-sweep-json v9"})");
    CHECK_THROWS_AS((void)read_report_json(bad), std::runtime_error);
  }

  TEST_CASE("file output writes the report plus a metadata sidecar") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "sncert_harness_test";
    fs::create_directories(dir);
    const fs::path out = dir / "report.json";

    ExperimentConfig cfg = small_config();
    cfg.n_iter = 2;
    const SweepReport report = run_sweep(cfg, SweepGrid{{cfg.v}, {cfg.n_ops}});
    const std::string meta_path = write_report_files(report, out.string(), "json");
    CHECK(fs::exists(out));
    CHECK(fs::exists(meta_path));
    CHECK(meta_path == (dir / "report.json.meta.json").string());

    std::ifstream meta(meta_path);
    std::stringstream buf;
    buf << meta.rdbuf();
    CHECK(buf.str().find("sncert-meta v1") != std::string::npos);
    CHECK(buf.str().find("generated_at") != std::string::npos);

    CHECK_THROWS_AS((void)write_report_files(report, (dir / "no_dir" / "x.json").string(), "json"),
                    std::runtime_error);
    CHECK_THROWS_AS((void)write_report_files(report, out.string(), "yaml"),
                    std::invalid_argument);
    fs::remove_all(dir);
  }
}
