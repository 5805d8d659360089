#include "sncert/moments.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sncert {

namespace {
constexpr double k_real_tol = 1e-12;
constexpr double k_degenerate_tol = 1e-12;
constexpr double k_ceil_slack = 1e-9;
constexpr char k_moments_schema[] = "moments-csv v1";

void require_real(const Matrix& o) {
  if (o.imag().cwiseAbs().maxCoeff() > k_real_tol)
    throw std::domain_error("expect_o: rotation must be real orthogonal");
}
}  // namespace

double expect_u(const StateModel& rho, const Matrix& u, const ObservablePair& obs) {
  const int d = rho.local_dim();
  if (obs.local_dim() != d || u.rows() != d || u.cols() != d)
    throw std::invalid_argument("expect_u: dimension mismatch");
  if (obs.rank_optimal_form()) {
    const Vector col = u.col(obs.basis_index());
    return rho.product_projector_expectation(col, col);
  }
  const Matrix a = u * obs.m() * u.adjoint();
  return rho.observable_pair_expectation(a);
}

double expect_o(const StateModel& rho, const Matrix& o, const ObservablePair& obs) {
  const int d = rho.local_dim();
  if (obs.local_dim() != d || o.rows() != d || o.cols() != d)
    throw std::invalid_argument("expect_o: dimension mismatch");
  require_real(o);
  if (obs.rank_optimal_form()) {
    const Vector e2 = o * obs.mhat_plus();
    const Vector e3 = o * obs.mhat_minus();
    return rho.product_projector_expectation(e2, e2) - rho.product_projector_expectation(e2, e3) +
           rho.product_projector_expectation(e3, e3) - rho.product_projector_expectation(e3, e2);
  }
  const Matrix b = o * obs.mhat() * o.transpose();
  return rho.observable_pair_expectation(b);
}

double exact_r(const StateModel& rho) {
  const double d = static_cast<double>(rho.local_dim());
  return (1.0 + rho.trace_swap()) / (d * (d + 1.0));
}

double exact_q(const StateModel& rho) {
  const double d = static_cast<double>(rho.local_dim());
  return 2.0 * (rho.trace_swap() - rho.trace_swap_partial_transpose()) / (d * (d - 1.0));
}

double exact_r_general(const StateModel& rho, const GeneralCoefficients& c) {
  return c.a1 + c.a2 * rho.trace_swap();
}

double exact_q_general(const StateModel& rho, const GeneralCoefficients& c) {
  return c.c1 + c.c2 * rho.trace_swap() + c.c3 * rho.trace_swap_partial_transpose();
}

double fidelity_from_moments(double r, double q, int d) {
  const double dm = static_cast<double>(d);
  return (dm + 1.0) * r - 0.5 * (dm - 1.0) * q - 1.0 / dm;
}

double fidelity_general(double r, double q, const GeneralCoefficients& c, int d) {
  if (std::abs(c.c3) < k_degenerate_tol || std::abs(c.a2) < k_degenerate_tol)
    throw std::invalid_argument("fidelity_general: degenerate coefficients");
  const double trace_swap = (r - c.a1) / c.a2;
  const double trace_swap_pt = (q - c.c1 - c.c2 * trace_swap) / c.c3;
  return trace_swap_pt / static_cast<double>(d);
}

int sn_from_fidelity(double fidelity, int d) {
  if (d < 2) throw std::invalid_argument("sn_from_fidelity: d must be >= 2");
  if (fidelity <= 0.0) return 1;
  const double raw = std::ceil(static_cast<double>(d) * fidelity - k_ceil_slack);
  return static_cast<int>(std::min(static_cast<double>(d), std::max(1.0, raw)));
}

std::array<ProjectorDescriptor, 5> projection_set(const Matrix& u, const Matrix& o,
                                                  const ObservablePair& obs) {
  if (!obs.rank_optimal_form())
    throw std::invalid_argument("projection_set: defined for the rank-optimal pair only");
  const int d = obs.local_dim();
  if (u.rows() != d || u.cols() != d || o.rows() != d || o.cols() != d)
    throw std::invalid_argument("projection_set: dimension mismatch");
  require_real(o);
  const Vector uj = u.col(obs.basis_index());
  const Vector e2 = o * obs.mhat_plus();
  const Vector e3 = o * obs.mhat_minus();
  return {ProjectorDescriptor{uj, uj}, ProjectorDescriptor{e2, e2}, ProjectorDescriptor{e2, e3},
          ProjectorDescriptor{e3, e3}, ProjectorDescriptor{e3, e2}};
}

double compose_e_o(double p2, double p3, double p4, double p5) { return p2 - p3 + p4 - p5; }

void write_moments_csv(std::ostream& os, const MomentSampleSet& ms) {
  if (ms.e_u.size() != ms.e_o.size())
    throw std::invalid_argument("write_moments_csv: E_U/E_O length mismatch");
  os << "# " << k_moments_schema << "\n";
  os << "index,E_U,E_O,provenance\n";
  os.precision(17);
  for (std::size_t i = 0; i < ms.e_u.size(); ++i)
    os << i << "," << ms.e_u[i] << "," << ms.e_o[i] << "," << ms.provenance << "\n";
}

MomentSampleSet read_moments_csv(std::istream& is, int d) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0 ||
      line.substr(2) != k_moments_schema)
    throw std::runtime_error("read_moments_csv: missing or unsupported schema line");
  if (!std::getline(is, line) || line != "index,E_U,E_O,provenance")
    throw std::runtime_error("read_moments_csv: malformed header row");
  MomentSampleSet ms;
  ms.d = d;
  std::size_t expected = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');
    if (static_cast<std::size_t>(std::stoull(field)) != expected)
      throw std::runtime_error("read_moments_csv: non-contiguous sample index");
    std::getline(row, field, ',');
    ms.e_u.push_back(std::stod(field));
    std::getline(row, field, ',');
    ms.e_o.push_back(std::stod(field));
    if (!std::getline(row, field, ','))
      throw std::runtime_error("read_moments_csv: missing provenance field");
    if (expected == 0)
      ms.provenance = field;
    else if (field != ms.provenance)
      throw std::runtime_error("read_moments_csv: inconsistent provenance");
    ++expected;
  }
  return ms;
}

}  // namespace sncert
