#pragma once

#include <vector>

#include "sncert/matlin.hpp"
#include "sncert/random_stream.hpp"

namespace sncert {

// Bipartite d ⊗ d density operator in one of two representations:
//
//  - dense:      an explicit d^2 x d^2 matrix;
//  - structured: sum_i w_i |k_i><k_i| + idc * I_{d^2}  (low rank + identity).
//
// Every expectation the pipeline needs has an O(d^2 * rank) path in the
// structured form, which is what keeps d > 32 sweeps tractable; dense
// construction and to_dense() are memory-cap checked.
class StateModel {
 public:
  static StateModel dense(int d, Matrix rho);
  static StateModel structured(int d, std::vector<double> weights, std::vector<Vector> kets,
                               double identity_coeff);

  int local_dim() const { return d_; }
  bool is_structured() const { return !is_dense_; }
  double trace() const;
  Matrix to_dense() const;

  // tr[rho (|x><x| ⊗ |y><y|)] for kets x, y on C^d.
  double product_projector_expectation(const Vector& x, const Vector& y) const;
  // tr[rho (a ⊗ a)] for Hermitian a on C^d.
  double observable_pair_expectation(const Matrix& a) const;

  double trace_swap() const;                    // tr(rho S)
  double trace_swap_partial_transpose() const;  // tr(rho S^Tb)
  double purity() const;                        // tr(rho^2)
  Matrix reduced_a() const;                     // tr_B rho
  Matrix reduced_b() const;                     // tr_A rho
  double fidelity_max_entangled() const;        // <phi+| rho |phi+>

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Vector>& kets() const { return kets_; }
  double identity_coeff() const { return identity_coeff_; }

  // Empty placeholder (d = 0); real states come from the named factories.
  StateModel() = default;

 private:
  int d_ = 0;
  bool is_dense_ = false;
  Matrix dense_;                  // dense form only
  std::vector<double> weights_;   // structured form only
  std::vector<Vector> kets_;      // unit kets on C^{d^2}
  double identity_coeff_ = 0.0;
};

// (1/sqrt d) sum_j |jj>, as a rank-one structured state.
StateModel max_entangled_state(int d);

// v |phi+><phi+| + (1-v)/d^2 * I, v in [0, 1].
StateModel isotropic_state(int d, double v);

// Pure |phi+^mu> = (1/sqrt mu) sum_{j<mu} |jj>, mu in [1, d].
StateModel partial_entangled_state(int d, int schmidt_rank);

// v |psi(beta)><psi(beta)| + (1-v)/d^2 * I with Schmidt amplitudes
// proportional to e^{-beta j}, normalized in 2-norm.
StateModel thermal_state(int d, double v, double beta);

// Random density operator on C^dim, Hilbert-Schmidt metric: G G† / tr(G G†)
// with G complex Ginibre on the full dim x dim space.
Matrix random_hs_density(int dim, RandomStream& rs);

// Dense bipartite state whose d^2 x d^2 matrix is HS-random.
StateModel random_hs_state(int d, RandomStream& rs);

// v |phi+><phi+| + (1-v) sigma with sigma HS-random on C^{d^2} (dense).
StateModel random_noise_state(int d, double v, RandomStream& rs);

// <phi+| rho |phi+>, the quantity every estimator in the library targets.
double fidelity_direct(const StateModel& rho);

// Exact Schmidt number of the isotropic state: 1 plus the number of
// thresholds (mu*d - 1)/(d^2 - 1) strictly exceeded by v.
int sn_exact_isotropic(int d, double v);

}  // namespace sncert
