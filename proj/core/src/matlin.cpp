#include "sncert/matlin.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace sncert::matlin {

namespace {
std::atomic<std::size_t> g_memory_cap_bytes{std::size_t{2} * 1024 * 1024 * 1024};

void require_square(const Matrix& a, int dim, const char* what) {
  if (a.rows() != dim || a.cols() != dim) {
    throw std::invalid_argument(std::string(what) + ": operator must be " +
                                std::to_string(dim) + "x" + std::to_string(dim));
  }
}
}  // namespace

std::size_t memory_cap_bytes() { return g_memory_cap_bytes.load(); }

void set_memory_cap_bytes(std::size_t bytes) { g_memory_cap_bytes.store(bytes); }

void check_dense_alloc(Eigen::Index rows, Eigen::Index cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
  const std::size_t bytes =
      static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) * sizeof(cdouble);
  if (rows != 0 && bytes / static_cast<std::size_t>(rows) / sizeof(cdouble) !=
                       static_cast<std::size_t>(cols)) {
    throw std::length_error("dense allocation size overflows");
  }
  if (bytes > g_memory_cap_bytes.load()) {
    throw std::length_error("dense allocation of " + std::to_string(bytes) +
                            " bytes exceeds the configured cap of " +
                            std::to_string(g_memory_cap_bytes.load()) + " bytes");
  }
}

Vector basis_ket(int dim, int index) {
  if (dim < 1) throw std::invalid_argument("basis_ket: dim must be >= 1");
  if (index < 0 || index >= dim) throw std::invalid_argument("basis_ket: index out of range");
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return v;
}

Vector max_entangled_ket(int d) {
  if (d < 1) throw std::invalid_argument("max_entangled_ket: d must be >= 1");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) v(static_cast<Eigen::Index>(j) * d + j) = amp;
  return v;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  check_dense_alloc(a.rows() * b.rows(), a.cols() * b.cols());
  return Eigen::kroneckerProduct(a, b);
}

Vector kron(const Vector& x, const Vector& y) {
  check_dense_alloc(x.size() * y.size(), 1);
  Vector out(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x(i) * y;
  return out;
}

Matrix swap_operator(int d) {
  if (d < 1) throw std::invalid_argument("swap_operator: d must be >= 1");
  const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
  check_dense_alloc(dd, dd);
  Matrix s = Matrix::Zero(dd, dd);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) s(static_cast<Eigen::Index>(j) * d + k, static_cast<Eigen::Index>(k) * d + j) = 1.0;
  return s;
}

Matrix partial_transpose_b(const Matrix& a, int d) {
  const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
  require_square(a, static_cast<int>(dd), "partial_transpose_b");
  check_dense_alloc(dd, dd);
  Matrix out(dd, dd);
  for (int r1 = 0; r1 < d; ++r1)
    for (int r2 = 0; r2 < d; ++r2)
      for (int c1 = 0; c1 < d; ++c1)
        for (int c2 = 0; c2 < d; ++c2)
          out(r1 * d + r2, c1 * d + c2) = a(r1 * d + c2, c1 * d + r2);
  return out;
}

Matrix partial_trace(const Matrix& a, int d, Subsystem traced_out) {
  const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
  require_square(a, static_cast<int>(dd), "partial_trace");
  Matrix out = Matrix::Zero(d, d);
  if (traced_out == Subsystem::b) {
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        for (int k = 0; k < d; ++k) out(r, c) += a(r * d + k, c * d + k);
  } else {
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        for (int k = 0; k < d; ++k) out(r, c) += a(k * d + r, k * d + c);
  }
  return out;
}

}  // namespace sncert::matlin
