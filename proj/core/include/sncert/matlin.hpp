#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace sncert {

using cdouble = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

namespace matlin {

// Allocation guard for dense matrices. Every routine that materializes a
// dense matrix checks the requested size against this cap (default 2 GiB)
// and throws std::length_error when it would be exceeded, so oversized
// workflows fail loudly instead of swapping. The cap is process-global.
std::size_t memory_cap_bytes();
void set_memory_cap_bytes(std::size_t bytes);
void check_dense_alloc(Eigen::Index rows, Eigen::Index cols);

// Computational basis vector |index> in C^dim.
Vector basis_ket(int dim, int index);

// (1/sqrt d) sum_j |j>|j> in C^d ⊗ C^d.
Vector max_entangled_ket(int d);

// Kronecker products. The composite index convention throughout the
// library is |a>⊗|b> -> a*d_b + b (row-major pairing).
Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& x, const Vector& y);

// SWAP operator on C^d ⊗ C^d: S|j,k> = |k,j>.
Matrix swap_operator(int d);

// Partial transpose over the second tensor factor of a d^2 x d^2 operator.
Matrix partial_transpose_b(const Matrix& a, int d);

enum class Subsystem { a, b };

// Trace out the named tensor factor of a d^2 x d^2 operator; returns d x d.
Matrix partial_trace(const Matrix& a, int d, Subsystem traced_out);

}  // namespace matlin
}  // namespace sncert
