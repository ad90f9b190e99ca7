#ifndef SKEWMOR_LA_CORE_HPP
#define SKEWMOR_LA_CORE_HPP

#include <filesystem>

#include "skewmor/types.hpp"

namespace skewmor {

/// Column-stacking isomorphism R^{m x n} -> R^{mn}.
ColumnVector vec(const DenseMatrix& a);

/// Inverse of vec(); requires v.size() == rows * cols.
DenseMatrix unvec(const ColumnVector& v, Index rows, Index cols);

/// Applies (V (x) W)^T to x without materializing the Kronecker product,
/// via (V (x) W)^T vec(B) = vec(W^T B V).  V and W must share their row
/// count n and x must have n^2 entries; the result has V.cols()*W.cols()
/// entries.  Cost O(n^2 r + n r^2).
ColumnVector apply_kron_transpose(const DenseMatrix& v, const DenseMatrix& w,
                                  const ColumnVector& x);

struct SvdResult {
  DenseMatrix left;              // n x d, orthonormal columns
  ColumnVector singular_values;  // length d, nonincreasing, >= 0
  DenseMatrix right_t;           // d x s
};

/// Thin SVD with a deterministic sign convention: the first nonzero entry
/// of each left singular vector is nonnegative.  Throws SvdError if the
/// backend does not converge or produces non-finite output.
SvdResult svd_thin(const DenseMatrix& a);

/// Binary matrix file, format "SKM1": 4 magic bytes, u64-le rows, u64-le
/// cols, then rows*cols binary64-le values in column-major order.
void write_matrix(const std::filesystem::path& path, const DenseMatrix& a);
DenseMatrix read_matrix(const std::filesystem::path& path);

}  // namespace skewmor

#endif
