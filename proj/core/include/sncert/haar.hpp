#pragma once

#include "sncert/matlin.hpp"
#include "sncert/random_stream.hpp"

namespace sncert {

// Haar-distributed random unitary on C^d: QR of a complex Ginibre matrix,
// with column k of Q rescaled by conj(R_kk)/|R_kk| so the result is exactly
// Haar rather than QR-convention biased (cf. arXiv:math-ph/0609050).
// A zero R diagonal entry (probability zero) triggers a resample.
Matrix sample_haar_unitary(int d, RandomStream& rs);

// Uniform random real orthogonal on R^d: QR of a real Ginibre matrix with
// column k of Q rescaled by sign(R_kk). Returned with complex scalar type
// for interface uniformity; entries are real.
Matrix sample_haar_orthogonal(int d, RandomStream& rs);

struct TwirlCoefficients {
  double a1 = 0.0;  // unitary twirl: a1*I + a2*S
  double a2 = 0.0;
  double c1 = 0.0;  // orthogonal twirl: c1*I + c2*S + c3*S^Tb
  double c2 = 0.0;
  double c3 = 0.0;
};

// Coefficients of the degree-2 average (twirl) of a Hermitian operator A
// on C^d ⊗ C^d over U⊗U conjugation (unitary case) and O⊗O congruence
// (orthogonal case). They depend on A only through tr A, tr(SA) and
// tr(S^Tb A).
TwirlCoefficients twirl_coefficients(const Matrix& a, int d);

// Analytic averages; both preserve the trace of A.
Matrix twirl_unitary_analytic(const Matrix& a, int d);
Matrix twirl_orthogonal_analytic(const Matrix& a, int d);

}  // namespace sncert
