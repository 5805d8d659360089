#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "sncert/estimator.hpp"
#include "sncert/matlin.hpp"
#include "sncert/random_stream.hpp"
#include "sncert/states.hpp"

using namespace sncert;

namespace {

// Dense mirror of a structured state, for cross-representation checks.
StateModel densified(const StateModel& s) { return StateModel::dense(s.local_dim(), s.to_dense()); }

}  // namespace

TEST_SUITE("states") {
  TEST_CASE("maximally entangled state has the textbook invariants") {
    for (int d : {2, 3, 5}) {
      const StateModel phi = max_entangled_state(d);
      CHECK(phi.trace() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(phi.purity() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(phi.fidelity_max_entangled() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(phi.trace_swap() == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(phi.trace_swap_partial_transpose() == doctest::Approx(double(d)).epsilon(1e-13));
      const Matrix ra = phi.reduced_a();
      CHECK((ra - Matrix::Identity(d, d) / double(d)).norm() < 1e-13);
      const Matrix rb = phi.reduced_b();
      CHECK((rb - Matrix::Identity(d, d) / double(d)).norm() < 1e-13);
    }
  }

  TEST_CASE("product projector expectation on phi+ is |<x|conj(y)>|^2 / d") {
    const int d = 4;
    const StateModel phi = max_entangled_state(d);
    for (int j = 0; j < d; ++j) {
      const Vector e = matlin::basis_ket(d, j);
      // <jj| phi+ > = 1/sqrt d for every j, so tr[rho |j><j| ⊗ |j><j|] = 1/d.
      CHECK(phi.product_projector_expectation(e, e) == doctest::Approx(1.0 / d).epsilon(1e-13));
      // Mismatched computational labels are orthogonal to phi+.
      const Vector f = matlin::basis_ket(d, (j + 1) % d);
      CHECK(phi.product_projector_expectation(e, f) == doctest::Approx(0.0).epsilon(1e-13));
    }
    // For a Haar ket u, tr[phi (|u><u| ⊗ |conj u><conj u|)] = 1/d exactly.
    RandomStream rs(5, 0);
    Vector u(d);
    for (int i = 0; i < d; ++i) u(i) = cdouble(rs.normal(), rs.normal());
    u.normalize();
    CHECK(phi.product_projector_expectation(u, u.conjugate()) ==
          doctest::Approx(1.0 / d).epsilon(1e-12));
  }

  TEST_CASE("structured and dense representations agree on every observable") {
    RandomStream rs(6, 0);
    const StateModel models[] = {
        isotropic_state(4, 0.7),
        thermal_state(4, 0.8, 1.0),
        partial_entangled_state(4, 2),
    };
    for (const StateModel& s : models) {
      const int d = s.local_dim();
      REQUIRE(s.is_structured());
      const StateModel dn = densified(s);
      REQUIRE(!dn.is_structured());

      CHECK(s.trace() == doctest::Approx(dn.trace()).epsilon(1e-12));
      CHECK(s.purity() == doctest::Approx(dn.purity()).epsilon(1e-12));
      CHECK(s.trace_swap() == doctest::Approx(dn.trace_swap()).epsilon(1e-12));
      CHECK(s.trace_swap_partial_transpose() ==
            doctest::Approx(dn.trace_swap_partial_transpose()).epsilon(1e-12));
      CHECK(s.fidelity_max_entangled() ==
            doctest::Approx(dn.fidelity_max_entangled()).epsilon(1e-12));
      CHECK((s.reduced_a() - dn.reduced_a()).norm() < 1e-12);
      CHECK((s.reduced_b() - dn.reduced_b()).norm() < 1e-12);

      Vector x(d), y(d);
      for (int i = 0; i < d; ++i) {
        x(i) = cdouble(rs.normal(), rs.normal());
        y(i) = cdouble(rs.normal(), rs.normal());
      }
      x.normalize();
      y.normalize();
      CHECK(s.product_projector_expectation(x, y) ==
            doctest::Approx(dn.product_projector_expectation(x, y)).epsilon(1e-12));

      Matrix a(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = cdouble(rs.normal(), rs.normal());
      a = ((a + a.adjoint()) / 2.0).eval();
      CHECK(s.observable_pair_expectation(a) ==
            doctest::Approx(dn.observable_pair_expectation(a)).epsilon(1e-11));
    }
  }

  TEST_CASE("isotropic fidelity and exact Schmidt number track the closed forms") {
    for (int d : {3, 5}) {
      for (double v : {0.0, 0.2, 0.5, 0.8, 1.0}) {
        const StateModel rho = isotropic_state(d, v);
        const double expected_f = v + (1.0 - v) / double(d * d);
        CHECK(fidelity_direct(rho) == doctest::Approx(expected_f).epsilon(1e-14));
        CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-14));
      }
      // Threshold crossings: v just above (mu d - 1)/(d^2 - 1) certifies mu+1.
      for (int mu = 1; mu < d; ++mu) {
        const double thr = (mu * double(d) - 1.0) / (double(d) * d - 1.0);
        CHECK(sn_exact_isotropic(d, thr - 1e-9) == mu);
        CHECK(sn_exact_isotropic(d, thr + 1e-9) == mu + 1);
      }
      CHECK(sn_exact_isotropic(d, 0.0) == 1);
      CHECK(sn_exact_isotropic(d, 1.0) == d);
    }
  }

  TEST_CASE("v = 0 noise families collapse to the maximally mixed state") {
    const int d = 3;
    RandomStream rs(7, 0);
    const StateModel iso = isotropic_state(d, 0.0);
    const StateModel noisy = random_noise_state(d, 0.0, rs);
    CHECK(fidelity_direct(iso) == doctest::Approx(1.0 / (d * d)).epsilon(1e-13));
    CHECK(iso.purity() == doctest::Approx(1.0 / (d * d)).epsilon(1e-13));
    // random_noise with v=0 is the random sigma itself, not maximally mixed;
    // but v=1 must be exactly phi+ regardless of the noise draw.
    const StateModel pure = random_noise_state(d, 1.0, rs);
    CHECK(fidelity_direct(pure) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(noisy.trace() == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("partial entangled state interpolates between product and phi+") {
    const int d = 5;
    const StateModel full = partial_entangled_state(d, d);
    CHECK(fidelity_direct(full) == doctest::Approx(1.0).epsilon(1e-13));
    const StateModel product = partial_entangled_state(d, 1);
    CHECK(fidelity_direct(product) == doctest::Approx(1.0 / d).epsilon(1e-13));
    const StateModel mid = partial_entangled_state(d, 3);
    // <phi+|phi_mu> = mu / sqrt(d mu), so the fidelity is mu / d — exactly
    // the certification threshold for Schmidt number mu.
    CHECK(fidelity_direct(mid) == doctest::Approx(3.0 / d).epsilon(1e-13));
    CHECK(sn_fidelity_witness(mid) == 3);
    CHECK(mid.purity() == doctest::Approx(1.0).epsilon(1e-13));
  }

  TEST_CASE("thermal state amplitudes follow the Boltzmann profile") {
    const int d = 4;
    const double beta = 1.3;
    const StateModel rho = thermal_state(d, 1.0, beta);
    CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-13));
    // Fidelity with phi+ = (sum_j lambda_j)^2 / d for amplitudes lambda.
    double z = 0.0, s = 0.0;
    for (int j = 0; j < d; ++j) z += std::exp(-2.0 * beta * j);
    for (int j = 0; j < d; ++j) s += std::exp(-beta * j) / std::sqrt(z);
    CHECK(fidelity_direct(rho) == doctest::Approx(s * s / d).epsilon(1e-12));
    // beta = 0 degenerates to phi+.
    CHECK(fidelity_direct(thermal_state(d, 1.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-13));
  }

  TEST_CASE("random HS densities are valid quantum states") {
    RandomStream rs(8, 0);
    const int dim = 9;
    const Matrix rho = random_hs_density(dim, rs);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
    CHECK((rho - rho.adjoint()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);

    const StateModel s = random_hs_state(3, rs);
    CHECK(s.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(!s.is_structured());
  }

  TEST_CASE("factory validation rejects out-of-range parameters") {
    CHECK_THROWS_AS((void)max_entangled_state(1), std::invalid_argument);
    CHECK_THROWS_AS((void)isotropic_state(3, -0.1), std::invalid_argument);
    CHECK_THROWS_AS((void)isotropic_state(3, 1.1), std::invalid_argument);
    CHECK_THROWS_AS((void)partial_entangled_state(3, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)partial_entangled_state(3, 4), std::invalid_argument);
    CHECK_THROWS_AS((void)thermal_state(3, -0.5, 1.0), std::invalid_argument);
    RandomStream rs(1, 0);
    CHECK_THROWS_AS((void)random_hs_density(0, rs), std::invalid_argument);
  }
}
