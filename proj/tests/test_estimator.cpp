#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sncert/estimator.hpp"
#include "sncert/moments.hpp"
#include "sncert/random_stream.hpp"
#include "sncert/states.hpp"
#include "sncert/tstat.hpp"

using namespace sncert;

TEST_SUITE("tstat") {
  TEST_CASE("regularized incomplete beta matches frozen references") {
    // I(0.5, 0.5; x) = (2/pi) asin(sqrt x), so I(0.5, 0.5; 1/4) = 1/3.
    CHECK(regularized_incomplete_beta(0.5, 0.5, 0.25) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(regularized_incomplete_beta(5.5, 0.5, 0.7) ==
          doctest::Approx(0.05266314470852397).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
  }

  TEST_CASE("t distribution CDF matches frozen references") {
    CHECK(student_t_cdf(2.2, 11) == doctest::Approx(0.974956944509098).epsilon(1e-12));
    CHECK(student_t_cdf(-1.5, 7) == doctest::Approx(0.08864924349498501).epsilon(1e-12));
    CHECK(student_t_cdf(0.5, 3) == doctest::Approx(0.6742760175759246).epsilon(1e-12));
    CHECK(student_t_cdf(4.0, 29) == doctest::Approx(0.9997999680271737).epsilon(1e-12));
    // Symmetry: cdf(0) = 1/2 and cdf(-t) + cdf(t) = 1.
    CHECK(student_t_cdf(0.0, 9) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(student_t_cdf(-2.7, 13) + student_t_cdf(2.7, 13) == doctest::Approx(1.0).epsilon(1e-13));
  }

  TEST_CASE("two-sided critical values match frozen references") {
    // The quantile search resolves to ~6e-11 relative accuracy, so 1e-9
    // still pins nine significant digits against the references.
    CHECK(t_quantile(0.95, 1) == doctest::Approx(12.706204736432095).epsilon(1e-9));
    CHECK(t_quantile(0.95, 11) == doctest::Approx(2.200985160082949).epsilon(1e-9));
    CHECK(t_quantile(0.99, 11) == doctest::Approx(3.1058065155392804).epsilon(1e-9));
    CHECK(t_quantile(0.999, 11) == doctest::Approx(4.436979338234604).epsilon(1e-9));
    CHECK(t_quantile(0.999, 5) == doctest::Approx(6.868826625881279).epsilon(1e-9));
    CHECK(t_quantile(0.999, 19) == doctest::Approx(3.883405852592132).epsilon(1e-9));
    CHECK(t_quantile(0.999, 29) == doctest::Approx(3.6594050194045704).epsilon(1e-9));
    CHECK(t_quantile(0.999, 499) == doctest::Approx(3.310130570395038).epsilon(1e-9));
    CHECK(t_quantile(0.95, 2) == doctest::Approx(4.302652729696142).epsilon(1e-9));
    // Heavy-dof limit approaches the normal critical value from above.
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(t_quantile(0.95, 1000000) == doctest::Approx(1.9599663568141066).epsilon(1e-10));
  }

  TEST_CASE("quantile and CDF are mutually inverse") {
    for (double level : {0.9, 0.99, 0.999}) {
      for (int dof : {3, 12, 40}) {
        const double crit = t_quantile(level, dof);
        CHECK(student_t_cdf(crit, dof) == doctest::Approx(1.0 - (1.0 - level) / 2.0).epsilon(1e-12));
      }
    }
  }
}

TEST_SUITE("estimator") {
  TEST_CASE("two-point 95% interval reproduces the hand-computed endpoints") {
    // xs = {0, 1}: mean 1/2, sd 1/sqrt(2), so the half-width is
    // t(0.95, 1) / 2 = 6.3531... — the canonical worked example.
    const ConfidenceInterval ci = t_confidence_interval({0.0, 1.0}, 0.95);
    CHECK(ci.lower == doctest::Approx(-5.8531).epsilon(1e-3));
    CHECK(ci.upper == doctest::Approx(6.8531).epsilon(1e-3));
    CHECK(ci.level == 0.95);
  }

  TEST_CASE("t interval follows the textbook formula on a fixed data set") {
    const std::vector<double> xs = {0.3, 0.5, 0.9};
    const double mean = (0.3 + 0.5 + 0.9) / 3.0;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= 2.0;
    const double half = t_quantile(0.95, 2) * std::sqrt(var / 3.0);
    const ConfidenceInterval ci = t_confidence_interval(xs, 0.95);
    CHECK(ci.lower == doctest::Approx(mean - half).epsilon(1e-13));
    CHECK(ci.upper == doctest::Approx(mean + half).epsilon(1e-13));
  }

  TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS((void)t_confidence_interval({1.0}, 0.95), std::invalid_argument);
    CHECK_THROWS_AS((void)t_confidence_interval({}, 0.95), std::invalid_argument);
    CHECK_THROWS_AS((void)t_confidence_interval({0.0, 1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)t_confidence_interval({0.0, 1.0}, 1.0), std::invalid_argument);
    RandomStream rs(1, 0);
    CHECK_THROWS_AS((void)bootstrap_confidence_interval({0.0, 1.0}, 0.95, 1, rs),
                    std::invalid_argument);
  }

  TEST_CASE("bootstrap intervals are deterministic and ordered") {
    std::vector<double> xs;
    RandomStream gen(41, 0);
    for (int i = 0; i < 30; ++i) xs.push_back(gen.normal() * 0.2 + 0.8);

    RandomStream a(52, 4), b(52, 4);
    const ConfidenceInterval ca = bootstrap_confidence_interval(xs, 0.99, 2000, a);
    const ConfidenceInterval cb = bootstrap_confidence_interval(xs, 0.99, 2000, b);
    CHECK(ca.lower == cb.lower);
    CHECK(ca.upper == cb.upper);
    CHECK(ca.lower <= ca.upper);
    // Percentile endpoints are means of subsets of the data, so they live
    // inside the range of the raw samples.
    const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    CHECK(ca.lower >= *mn);
    CHECK(ca.upper <= *mx);
  }

  TEST_CASE("literal bootstrap width shrinks as resamples grow") {
    std::vector<double> xs;
    RandomStream gen(42, 0);
    for (int i = 0; i < 25; ++i) xs.push_back(gen.normal());
    RandomStream r1(7, 1), r2(7, 2);
    const ConfidenceInterval small_b =
        bootstrap_confidence_interval(xs, 0.95, 50, r1, /*literal=*/true);
    const ConfidenceInterval large_b =
        bootstrap_confidence_interval(xs, 0.95, 5000, r2, /*literal=*/true);
    CHECK((large_b.upper - large_b.lower) < (small_b.upper - small_b.lower));
  }

  TEST_CASE("per-sample fidelity applies the reconstruction affinely") {
    const int d = 5;
    CHECK(per_sample_fidelity(0.2, -0.1, d) ==
          doctest::Approx(6.0 * 0.2 + 2.0 * 0.1 - 0.2).epsilon(1e-14));
    CHECK_THROWS_AS((void)per_sample_fidelity(0.2, -0.1, 1), std::invalid_argument);

    MomentSampleSet ms;
    ms.d = d;
    ms.e_u = {0.2, 0.3};
    ms.e_o = {-0.1, -0.4};
    const FidelitySampleSet fs = per_sample_fidelities(ms);
    REQUIRE(fs.values.size() == 2);
    CHECK(fs.d == d);
    CHECK(fs.values[0] == doctest::Approx(per_sample_fidelity(0.2, -0.1, d)).epsilon(1e-14));
    CHECK(fs.values[1] == doctest::Approx(per_sample_fidelity(0.3, -0.4, d)).epsilon(1e-14));

    ms.e_o.pop_back();
    CHECK_THROWS_AS((void)per_sample_fidelities(ms), std::invalid_argument);
  }

  TEST_CASE("estimate_sn dispatches methods and certifies from the lower edge") {
    FidelitySampleSet fs;
    fs.d = 4;
    RandomStream gen(43, 0);
    for (int i = 0; i < 40; ++i) fs.values.push_back(0.8 + 0.05 * gen.normal());

    const SnEstimate t_est = estimate_sn(fs, 0.999, IntervalMethod::t);
    CHECK(t_est.method == IntervalMethod::t);
    CHECK(t_est.samples == 40);
    const ConfidenceInterval ci = t_confidence_interval(fs.values, 0.999);
    CHECK(t_est.f_lower == ci.lower);
    CHECK(t_est.f_upper == ci.upper);
    CHECK(t_est.sn_lower == sn_from_fidelity(ci.lower, 4));

    RandomStream rs(44, 0);
    const SnEstimate b_est = estimate_sn(fs, 0.999, IntervalMethod::bootstrap_percentile, 800, &rs);
    CHECK(b_est.method == IntervalMethod::bootstrap_percentile);
    CHECK(b_est.f_lower <= b_est.f_upper);
    CHECK_THROWS_AS((void)estimate_sn(fs, 0.999, IntervalMethod::bootstrap_percentile),
                    std::invalid_argument);
  }

  TEST_CASE("method names round-trip and accept the documented alias") {
    CHECK(to_string(IntervalMethod::t) == "t");
    CHECK(to_string(IntervalMethod::bootstrap_percentile) == "bootstrap");
    CHECK(to_string(IntervalMethod::bootstrap_literal) == "bootstrap-literal");
    CHECK(interval_method_from_string("t") == IntervalMethod::t);
    CHECK(interval_method_from_string("bootstrap") == IntervalMethod::bootstrap_percentile);
    CHECK(interval_method_from_string("bootstrap-percentile") ==
          IntervalMethod::bootstrap_percentile);
    CHECK(interval_method_from_string("bootstrap-literal") == IntervalMethod::bootstrap_literal);
    CHECK_THROWS_AS((void)interval_method_from_string("median"), std::invalid_argument);
  }

  TEST_CASE("error metrics report the spread against the exact witness") {
    const ErrorMetrics em = error_metrics({3, 5, 4}, 6);
    CHECK(em.e_max == 3);  // 6 - min(3,5,4)
    CHECK(em.e_min == 1);  // 6 - max(3,5,4)
    CHECK_THROWS_AS((void)error_metrics({}, 6), std::invalid_argument);
  }

  TEST_CASE("fidelity witness agrees with the exact isotropic Schmidt number") {
    for (int d : {3, 5}) {
      for (double v : {0.1, 0.35, 0.5, 0.77, 0.95, 1.0}) {
        CHECK(sn_fidelity_witness(isotropic_state(d, v)) == sn_exact_isotropic(d, v));
      }
    }
  }
}
