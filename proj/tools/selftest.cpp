#include "selftest.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "sncert/baselines.hpp"
#include "sncert/estimator.hpp"
#include "sncert/haar.hpp"
#include "sncert/harness.hpp"
#include "sncert/matlin.hpp"
#include "sncert/moments.hpp"
#include "sncert/shots.hpp"
#include "sncert/states.hpp"
#include "sncert/tstat.hpp"

namespace {

using namespace sncert;

struct Suite {
  int failures = 0;

  void check(bool ok, const std::string& name, const std::string& detail = "") {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
    if (!ok && !detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << '\n';
    if (!ok) ++failures;
  }

  void check_close(double got, double want, double tol, const std::string& name) {
    const bool ok = std::isfinite(got) && std::fabs(got - want) <= tol;
    char detail[128];
    std::snprintf(detail, sizeof(detail), "got %.12g, want %.12g +- %.3g", got, want, tol);
    check(ok, name, detail);
  }
};

void check_quantile_oracles(Suite& s) {
  // Frozen reference values for the inverse-CDF implementations.
  s.check_close(t_quantile(0.95, 1.0), 12.706204736432095, 2e-6, "t quantile, level 0.95, dof 1");
  s.check_close(t_quantile(0.95, 11.0), 2.200985160082949, 1e-8, "t quantile, level 0.95, dof 11");
  s.check_close(t_quantile(0.99, 11.0), 3.1058065155392804, 1e-8, "t quantile, level 0.99, dof 11");
  s.check_close(t_quantile(0.999, 11.0), 4.436979338234604, 1e-8,
                "t quantile, level 0.999, dof 11");
  s.check_close(t_quantile(0.999, 5.0), 6.868826625881279, 1e-8, "t quantile, level 0.999, dof 5");
  s.check_close(t_quantile(0.999, 19.0), 3.883405852592132, 1e-8,
                "t quantile, level 0.999, dof 19");
  s.check_close(t_quantile(0.999, 29.0), 3.6594050194045704, 1e-8,
                "t quantile, level 0.999, dof 29");
  s.check_close(normal_quantile(0.975), 1.959963984540054, 1e-10, "normal quantile 0.975");
  s.check_close(t_quantile(0.95, 1e6), 1.9599663568141066, 1e-8,
                "t quantile large-dof path, dof 1e6");

  const auto ci = t_confidence_interval({0.0, 1.0}, 0.95);
  s.check_close(ci.lower, -5.853102368, 1e-3, "two-point t interval, lower edge");
  s.check_close(ci.upper, 6.853102368, 1e-3, "two-point t interval, upper edge");
}

void check_moment_identities(Suite& s) {
  for (int d : {2, 3, 4, 5}) {
    RandomStream rs(7, static_cast<std::uint64_t>(d));
    const StateModel rho = random_hs_state(d, rs);
    const double via_moments = fidelity_from_moments(exact_r(rho), exact_q(rho), d);
    const double direct = fidelity_direct(rho);
    s.check_close(via_moments, direct, 1e-10,
                  "fidelity from exact moments, random state, d=" + std::to_string(d));
  }

  // The orthogonal-rotation expectation of |phi+> is -2/d for every O.
  RandomStream rs(11, 0);
  const int d = 5;
  const StateModel phi = max_entangled_state(d);
  const ObservablePair obs = ObservablePair::rank_optimal(d);
  const Matrix o = sample_haar_orthogonal(d, rs);
  s.check_close(expect_o(phi, o, obs), -2.0 / d, 1e-12,
                "rotation-independent E_O on the maximally entangled state");
}

void check_rank_optimal_coefficients(Suite& s) {
  const int d = 4;
  const auto c = general_coefficients(ObservablePair::rank_optimal(d));
  const double dd = d;
  s.check_close(c.a1, 1.0 / (dd * (dd + 1.0)), 1e-15, "rank-optimal a1 closed form");
  s.check_close(c.a2, 1.0 / (dd * (dd + 1.0)), 1e-15, "rank-optimal a2 closed form");
  s.check_close(c.c1, 0.0, 1e-15, "rank-optimal c1 closed form");
  s.check_close(c.c2, 2.0 / (dd * (dd - 1.0)), 1e-15, "rank-optimal c2 closed form");
  s.check_close(c.c3, -2.0 / (dd * (dd - 1.0)), 1e-15, "rank-optimal c3 closed form");
}

void check_general_pair_identity(Suite& s) {
  const int d = 3;
  RandomStream rs(23, 1);

  // Diagonal Hermitian M with a known spectrum, and a scaled antisymmetric
  // rank-two Mhat with eigenvalues {+a, -a, 0}.
  Eigen::VectorXd m_spec(d);
  for (int j = 0; j < d; ++j) m_spec[j] = rs.normal();
  Matrix m = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) m(j, j) = m_spec[j];

  const double a = 1.7;
  Matrix mhat = Matrix::Zero(d, d);
  mhat(0, d - 1) = cdouble(0.0, -a);
  mhat(d - 1, 0) = cdouble(0.0, a);
  Eigen::VectorXd mhat_spec = Eigen::VectorXd::Zero(d);
  mhat_spec[0] = a;
  mhat_spec[1] = -a;

  const ObservablePair obs = ObservablePair::general(m, m_spec, mhat, mhat_spec);
  const auto coeff = general_coefficients(obs);
  const StateModel rho = random_hs_state(d, rs);
  const double r = exact_r_general(rho, coeff);
  const double q = exact_q_general(rho, coeff);
  s.check_close(fidelity_general(r, q, coeff, d), fidelity_direct(rho), 1e-10,
                "fidelity reconstruction under a general observable pair");
}

void check_twirl_sampling(Suite& s) {
  const int d = 3;
  RandomStream rs(2024, 5);
  Matrix a = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d * d; ++i) {
    for (int j = 0; j < d * d; ++j) a(i, j) = cdouble(rs.normal(), rs.normal());
  }
  a = ((a + a.adjoint()) / 2.0).eval();

  const int samples = 2000;
  Matrix acc_u = Matrix::Zero(d * d, d * d);
  Matrix acc_o = Matrix::Zero(d * d, d * d);
  for (int k = 0; k < samples; ++k) {
    const Matrix u = sample_haar_unitary(d, rs);
    const Matrix uu = matlin::kron(u, u);
    acc_u += uu * a * uu.adjoint();
    const Matrix o = sample_haar_orthogonal(d, rs);
    const Matrix oo = matlin::kron(o, o);
    acc_o += oo * a * oo.transpose();
  }
  acc_u /= samples;
  acc_o /= samples;

  const double err_u = (acc_u - twirl_unitary_analytic(a, d)).norm();
  const double err_o = (acc_o - twirl_orthogonal_analytic(a, d)).norm();
  s.check(err_u < 0.3, "empirical unitary twirl near its analytic form",
          "Frobenius error " + std::to_string(err_u));
  s.check(err_o < 0.3, "empirical orthogonal twirl near its analytic form",
          "Frobenius error " + std::to_string(err_o));
}

void check_bases(Suite& s) {
  const MubTriple good = build_3mubs(20);
  s.check(good.valid, "basis triple valid at d=20",
          "max deviation " + std::to_string(good.max_deviation));

  const MubTriple flagged = build_3mubs(20, 1.0, true);
  s.check(!flagged.valid, "a*j/(2d) linear-phase variant flagged at d=20",
          "unexpectedly valid");

  const StateModel phi = max_entangled_state(6);
  s.check_close(s3d_statistic(phi, build_3mubs(6)), 3.0, 1e-10,
                "projector statistic on the maximally entangled state");
}

void check_isotropic_thresholds(Suite& s) {
  const int d = 5;
  bool ok = true;
  std::string detail;
  for (int mu = 1; mu < d; ++mu) {
    const double threshold = (mu * static_cast<double>(d) - 1.0) / (d * d - 1.0);
    const int below = sn_from_fidelity(fidelity_direct(isotropic_state(d, threshold - 1e-6)), d);
    const int above = sn_from_fidelity(fidelity_direct(isotropic_state(d, threshold + 1e-6)), d);
    if (below != mu || above != mu + 1) {
      ok = false;
      detail = "mu=" + std::to_string(mu) + " gave " + std::to_string(below) + "/" +
               std::to_string(above);
      break;
    }
  }
  s.check(ok, "certified bound jumps exactly at the isotropic thresholds, d=5", detail);
}

void check_accounting_and_determinism(Suite& s) {
  ExperimentConfig cfg;
  cfg.d = 4;
  cfg.family = StateFamily::isotropic;
  cfg.v = 0.9;
  cfg.n_ops = 6;
  cfg.n_iter = 3;
  cfg.seed = 42;

  const TrialRecord exact = run_trial(cfg, 0, 0);
  s.check(exact.projector_evals == 30 && exact.shots_used == 0,
          "exact trial records 5 N projector evaluations",
          std::to_string(exact.projector_evals) + " projectors, " +
              std::to_string(exact.shots_used) + " shots");

  ExperimentConfig shot_cfg = cfg;
  shot_cfg.exact_expectations = false;
  const TrialRecord shots = run_trial(shot_cfg, 0, 0);
  s.check(shots.projector_evals == 30 && shots.shots_used == 30 * 400,
          "shot-mode trial records 5 N M shots",
          std::to_string(shots.projector_evals) + " projectors, " +
              std::to_string(shots.shots_used) + " shots");

  const TrialRecord again = run_trial(cfg, 0, 0);
  s.check(exact.f_lower == again.f_lower && exact.f_upper == again.f_upper &&
              exact.sn_estimate == again.sn_estimate,
          "identical configuration reproduces the trial bit-for-bit");

  SweepGrid grid{{0.9}, {6}};
  ExperimentConfig serial = cfg;
  serial.threads = 1;
  ExperimentConfig parallel = cfg;
  parallel.threads = 4;
  const SweepReport r1 = run_sweep(serial, grid);
  const SweepReport r2 = run_sweep(parallel, grid);
  s.check(r1.cells[0].mu_est_min == r2.cells[0].mu_est_min &&
              r1.cells[0].mu_est_max == r2.cells[0].mu_est_max &&
              r1.cells[0].mean_f_lower == r2.cells[0].mean_f_lower,
          "sweep results independent of thread count");
  s.check(r1.cells[0].mu_est_min <= exact.sn_estimate &&
              exact.sn_estimate <= r1.cells[0].mu_est_max,
          "single-cell sweep brackets its own trial 0");
}

void check_serialization(Suite& s) {
  MomentSampleSet ms;
  ms.d = 4;
  ms.e_u = {0.123456789012345678, 0.25, 1.0 / 3.0};
  ms.e_o = {-0.5, 0.0625, -2.0 / 3.0};
  std::stringstream buf;
  write_moments_csv(buf, ms);
  const MomentSampleSet back = read_moments_csv(buf, 4);
  s.check(back.e_u == ms.e_u && back.e_o == ms.e_o && back.provenance == ms.provenance,
          "moment CSV round-trips exactly");

  ExperimentConfig cfg;
  cfg.d = 3;
  cfg.family = StateFamily::isotropic;
  cfg.v = 0.8;
  cfg.n_ops = 4;
  cfg.n_iter = 2;
  cfg.seed = 9;
  const SweepReport report = run_sweep(cfg, SweepGrid{{0.7, 0.8}, {4}});
  std::stringstream js;
  write_report_json(js, report);
  const SweepReport parsed = read_report_json(js);
  std::stringstream js2;
  write_report_json(js2, parsed);
  s.check(js.str() == js2.str(), "sweep report JSON round-trips exactly");
}

}  // namespace

int run_selftest() {
  Suite s;
  check_quantile_oracles(s);
  check_moment_identities(s);
  check_rank_optimal_coefficients(s);
  check_general_pair_identity(s);
  check_twirl_sampling(s);
  check_bases(s);
  check_isotropic_thresholds(s);
  check_accounting_and_determinism(s);
  check_serialization(s);

  if (s.failures == 0) {
    std::cout << "selftest: all checks passed\n";
    return 0;
  }
  std::cout << "selftest: " << s.failures << " check(s) failed\n";
  return 1;
}
