#pragma once

#include <cstdint>

#include "sncert/moments.hpp"
#include "sncert/random_stream.hpp"

namespace sncert {

// Running totals of measurement resources actually consumed.
struct ShotLedger {
  std::uint64_t projectors = 0;
  std::uint64_t shots = 0;
};

// Finite-statistics sampling configuration: every projector expectation is
// estimated by an independent Binomial(shots_per_projector, p) draw.
struct ShotConfig {
  std::int64_t shots_per_projector;
  RandomStream rs;
  ShotLedger ledger;
};

// Default shot budget per projector.
std::int64_t default_shots_per_projector(int d);

// Binomial estimate of tr[rho P]. Tiny negative probabilities from
// floating-point roundoff (>= -1e-10) clamp to zero; anything further
// outside [0, 1] is a hard error.
double estimate_projector_prob(const StateModel& rho, const ProjectorDescriptor& p,
                               ShotConfig& cfg);

// Finite-shot counterparts of expect_u / expect_o, assembled from the
// five-projector decomposition (1 projector for E_U, 4 for E_O).
double measured_e_u(const StateModel& rho, const Matrix& u, const ObservablePair& obs,
                    ShotConfig& cfg);
double measured_e_o(const StateModel& rho, const Matrix& o, const ObservablePair& obs,
                    ShotConfig& cfg);

}  // namespace sncert
