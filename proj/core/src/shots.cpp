#include "sncert/shots.hpp"

#include <stdexcept>
#include <string>

namespace sncert {

namespace {
constexpr double k_negative_band = 1e-10;
}

std::int64_t default_shots_per_projector(int d) { return 100LL * d; }

double estimate_projector_prob(const StateModel& rho, const ProjectorDescriptor& p,
                               ShotConfig& cfg) {
  if (cfg.shots_per_projector < 1)
    throw std::invalid_argument("estimate_projector_prob: shot count must be >= 1");
  double prob = rho.product_projector_expectation(p.left, p.right);
  if (prob < -k_negative_band || prob > 1.0 + k_negative_band)
    throw std::runtime_error("estimate_projector_prob: probability " + std::to_string(prob) +
                             " outside the tolerated [0,1] band");
  if (prob < 0.0) prob = 0.0;
  if (prob > 1.0) prob = 1.0;
  const std::int64_t hits = cfg.rs.binomial(cfg.shots_per_projector, prob);
  cfg.ledger.projectors += 1;
  cfg.ledger.shots += static_cast<std::uint64_t>(cfg.shots_per_projector);
  return static_cast<double>(hits) / static_cast<double>(cfg.shots_per_projector);
}

double measured_e_u(const StateModel& rho, const Matrix& u, const ObservablePair& obs,
                    ShotConfig& cfg) {
  const auto projectors = projection_set(u, Matrix::Identity(rho.local_dim(), rho.local_dim()), obs);
  return estimate_projector_prob(rho, projectors[0], cfg);
}

double measured_e_o(const StateModel& rho, const Matrix& o, const ObservablePair& obs,
                    ShotConfig& cfg) {
  const auto projectors = projection_set(Matrix::Identity(rho.local_dim(), rho.local_dim()), o, obs);
  const double p2 = estimate_projector_prob(rho, projectors[1], cfg);
  const double p3 = estimate_projector_prob(rho, projectors[2], cfg);
  const double p4 = estimate_projector_prob(rho, projectors[3], cfg);
  const double p5 = estimate_projector_prob(rho, projectors[4], cfg);
  return compose_e_o(p2, p3, p4, p5);
}

}  // namespace sncert
