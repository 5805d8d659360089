#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "sncert/matlin.hpp"
#include "sncert/observables.hpp"
#include "sncert/states.hpp"

namespace sncert {

// Single-rotation expectations:
//   E_U = tr[rho (U M U†)⊗(U M U†)],  E_O = tr[rho (O Mhat O^T)⊗(O Mhat O^T)].
// O must be real (domain error otherwise).
double expect_u(const StateModel& rho, const Matrix& u, const ObservablePair& obs);
double expect_o(const StateModel& rho, const Matrix& o, const ObservablePair& obs);

// Haar averages of the expectations above for the rank-optimal pair:
//   R = (1 + tr(rho S)) / (d(d+1)),   Q = 2 tr[rho (S - S^Tb)] / (d(d-1)).
double exact_r(const StateModel& rho);
double exact_q(const StateModel& rho);

// The same averages under a general observable pair.
double exact_r_general(const StateModel& rho, const GeneralCoefficients& c);
double exact_q_general(const StateModel& rho, const GeneralCoefficients& c);

// Fidelity to |phi+> reconstructed from the two moments,
//   F = (d+1) R - (d-1)/2 Q - 1/d  (rank-optimal pair).
double fidelity_from_moments(double r, double q, int d);

// General-pair reconstruction F = [Q - c1 - c2 (R - a1)/a2] / (d c3).
// Note: reads the moments back to tr(rho S) and tr(rho S^Tb) before
// assembling F; degenerate a2 or c3 is a domain error.
double fidelity_general(double r, double q, const GeneralCoefficients& c, int d);

// Schmidt-number lower bound certified by a fidelity value:
// 1 for F <= 0, otherwise ceil(d F) clamped to [1, d]. A 1e-9 slack
// keeps exact threshold values from rounding up spuriously.
int sn_from_fidelity(double fidelity, int d);

// Rank-one product projector |left><left| ⊗ |right><right|.
struct ProjectorDescriptor {
  Vector left;
  Vector right;
};

// The five local projectors measured per rotation pair (U, O) with the
// rank-optimal observables: (u,u), (e2,e2), (e2,e3), (e3,e3), (e3,e2)
// where u = U|j>, e2 = O λ+, e3 = O λ-. Their expectations p1..p5 satisfy
// E_U = p1 and E_O = p2 - p3 + p4 - p5.
std::array<ProjectorDescriptor, 5> projection_set(const Matrix& u, const Matrix& o,
                                                  const ObservablePair& obs);

double compose_e_o(double p2, double p3, double p4, double p5);

// One trial's worth of sampled first-moment estimates.
struct MomentSampleSet {
  int d = 0;
  std::vector<double> e_u;
  std::vector<double> e_o;
  std::string provenance = "exact";  // "exact" or "shots:<M>"

  std::size_t size() const { return e_u.size(); }
};

// CSV schema "moments-csv v1": header comment line, then
// index,E_U,E_O,provenance rows. Round-trips bit-exactly.
void write_moments_csv(std::ostream& os, const MomentSampleSet& ms);
MomentSampleSet read_moments_csv(std::istream& is, int d);

}  // namespace sncert
