#pragma once

#include <array>
#include <string>

#include "sncert/matlin.hpp"
#include "sncert/states.hpp"

namespace sncert {

// Three mutually unbiased bases: the computational basis plus two
// quadratic-phase bases. Columns of bases[z] are the basis kets.
struct MubTriple {
  int d = 0;
  double alpha = 1.0;
  // True selects the linear phase a*j/(2d); the default uses a*j/d, the
  // Fourier-type convention that passes validation for every tested d.
  bool printed_phase_convention = false;
  std::array<Matrix, 3> bases;
  bool valid = false;          // all construction checks passed
  double max_deviation = 0.0;  // worst orthonormality/unbiasedness residual
};

// Builds the triple and validates it: each basis orthonormal within 1e-10
// and every cross-basis overlap satisfying | |<e_a^z|e_b^z'>|^2 - 1/d | <=
// 1e-8. Failures are carried in `valid`/`max_deviation`, never hidden.
MubTriple build_3mubs(int d, double alpha = 1.0, bool printed_phase_convention = false);

// S_{3,d}(rho) = sum_z sum_a tr[rho |e_a^z><e_a^z| (x) |conj(e_a^z)><conj(e_a^z)|],
// a sum over 3d product-projector expectations.
double s3d_statistic(const StateModel& rho, const MubTriple& mubs);

// Schmidt-number bound certified by S: states of Schmidt number mu obey
// S <= 1 + 2 mu / d, so S certifies ceil(d (S - 1) / 2).
int sn_from_3mubs(double s, int d);

// ||T||^2 = d^2 tr(rho^2) - d tr(rho_A^2) - d tr(rho_B^2) + 1, the squared
// Frobenius norm of the correlation block, from global and marginal purities.
double correlation_norm_sq(const StateModel& rho);

// Second-moment criterion: certified Schmidt number from comparing the
// state's correlation norm (and purities) against rank-mu maximally
// entangled references, whose ladder is d^2 + 1 - 2d/mu.
int sn_from_second_moment(const StateModel& rho);

// Entanglement-measure bound: the minimal trace distance to the separable
// set is at least fidelity_from_moments(r, q, d) - 1/d.
double trace_distance_lower_bound(double r, double q, int d);

struct CriterionResult {
  std::string name;
  double statistic = 0.0;
  int sn_bound = 1;
  long projection_count = 0;
};

// Bundled evaluations used by the experiment harness. mub_criterion
// refuses an invalid triple so a flagged construction cannot feed a
// certified-looking bound downstream.
CriterionResult mub_criterion(const StateModel& rho, const MubTriple& mubs);
CriterionResult second_moment_criterion(const StateModel& rho);

}  // namespace sncert
