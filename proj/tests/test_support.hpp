#ifndef SKEWMOR_TEST_SUPPORT_HPP
#define SKEWMOR_TEST_SUPPORT_HPP

#include <random>

#include "skewmor/types.hpp"

namespace skewmor::test {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline DenseMatrix random_matrix(std::mt19937_64& gen, Index rows, Index cols) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DenseMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = dist(gen);
  }
  return m;
}

inline ColumnVector random_vector(std::mt19937_64& gen, Index n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ColumnVector v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(gen);
  return v;
}

inline DenseMatrix random_skew(std::mt19937_64& gen, Index n) {
  const DenseMatrix a = random_matrix(gen, n, n);
  return a - a.transpose().eval();
}

/// Orthonormal n x r basis from the QR of a random matrix.
inline DenseMatrix random_orthonormal(std::mt19937_64& gen, Index n, Index r) {
  const DenseMatrix a = random_matrix(gen, n, r);
  Eigen::HouseholderQR<DenseMatrix> qr(a);
  DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(n, r);
  return q;
}

/// Explicit Kronecker product, the oracle against apply_kron_transpose and
/// the Dtilde construction; only ever used at toy sizes.
inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline double max_abs(const DenseMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

}  // namespace skewmor::test

#endif
