#pragma once

#include "sncert/matlin.hpp"

namespace sncert {

// Coefficients of the first moments under a general observable pair:
//   R(rho) = a1 + a2 tr(rho S)
//   Q(rho) = c1 + c2 tr(rho S) + c3 tr(rho S^Tb)
struct GeneralCoefficients {
  double a1 = 0.0;
  double a2 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

// The two local observables measured after the random rotations:
// M (Hermitian, conjugated by unitaries) and Mhat (Hermitian with
// Mhat^T = -Mhat, congruence-transformed by orthogonals).
//
// The rank-optimal pair is M = |j><j| and Mhat = -i|0><d-1| + i|d-1><0|
// (eigenvalues ±1); its Mhat eigenvectors generate the five-projector
// measurement decomposition. General pairs carry their spectra so the
// moment coefficients never require an eigensolver here.
class ObservablePair {
 public:
  static ObservablePair rank_optimal(int d, int basis_index = 0);
  static ObservablePair general(Matrix m, Eigen::VectorXd m_spectrum, Matrix mhat,
                                Eigen::VectorXd mhat_spectrum);

  int local_dim() const { return d_; }
  bool rank_optimal_form() const { return rank_optimal_; }
  int basis_index() const { return basis_index_; }

  const Matrix& m() const { return m_; }
  const Matrix& mhat() const { return mhat_; }
  const Eigen::VectorXd& m_spectrum() const { return m_spectrum_; }
  const Eigen::VectorXd& mhat_spectrum() const { return mhat_spectrum_; }

  // Unit eigenvectors of the rank-optimal Mhat for eigenvalues +1 and -1.
  // Throw for general pairs.
  const Vector& mhat_plus() const;
  const Vector& mhat_minus() const;

 private:
  ObservablePair() = default;

  int d_ = 0;
  bool rank_optimal_ = false;
  int basis_index_ = 0;
  Matrix m_, mhat_;
  Eigen::VectorXd m_spectrum_, mhat_spectrum_;
  Vector mhat_plus_, mhat_minus_;
};

// Moment coefficients from the pair's spectra. Throws when |c3| < 1e-12
// (degenerate Mhat: the fidelity cannot be reconstructed).
GeneralCoefficients general_coefficients(const ObservablePair& obs);

}  // namespace sncert
