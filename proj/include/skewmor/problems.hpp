#ifndef SKEWMOR_PROBLEMS_HPP
#define SKEWMOR_PROBLEMS_HPP

#include <optional>

#include "skewmor/skewgrad.hpp"
#include "skewmor/types.hpp"

namespace skewmor {

/// Uniform periodic grid on a torus of length L, points x_i = offset + i*dx.
struct GridConfig {
  double length = 0.0;
  Index n = 0;
  double dx = 0.0;
  double offset = 0.0;

  /// offset defaults to -L/2 so that pulse profiles centred at x = 0 decay
  /// to ~0 at the periodic boundary.
  static GridConfig make(double length, Index n,
                         std::optional<double> offset = std::nullopt);
};

/// Prefactor of the second-difference matrix.  `standard` is the consistent
/// 1/dx^2 second-derivative stencil; `paper_literal` (1/(2 dx)) is kept for
/// forensic comparison only.
enum class D2Scaling { standard, paper_literal };

struct DifferenceOperators {
  DenseMatrix d1;  // circulant central first difference, exactly skew
  DenseMatrix d2;  // circulant (1, -2, 1) second difference
  DenseMatrix d3;  // d1 * d2
  D2Scaling d2_scaling = D2Scaling::standard;
};

/// Circulant central first difference: +1/(2 dx) on the superdiagonal,
/// -1/(2 dx) on the subdiagonal, periodic wrap.  Valid for n >= 3.
DenseMatrix first_difference_matrix(Index n, double dx);

/// Circulant (1, -2, 1) stencil scaled per D2Scaling.  Valid for n >= 3.
DenseMatrix second_difference_matrix(Index n, double dx, D2Scaling scaling);

/// Builds d1, d2 and d3 = d1*d2 on the grid.  Requires n >= 5 so the
/// five-point stencil of d3 does not wrap onto itself.
DifferenceOperators central_diff_ops(const GridConfig& grid,
                                     D2Scaling scaling = D2Scaling::standard);

/// Semi-discrete KdV: S(y) = -(2(Y D1 + D1 Y) + D3), H(y) = y^T y / 2.
/// Carries the affine decomposition (D = -2 D1, D_c = -D3), a stencil-based
/// per-entry evaluator and an analytic rhs Jacobian.
SkewGradientSystem kdv_system(const GridConfig& grid,
                              const DifferenceOperators& ops);

/// Semi-discrete mKdV: S(y) = -(3/2 (Y^2 D1 + D1 Y^2) + D3), H as KdV.
/// S depends nonlinearly on y, so no affine decomposition exists; entry
/// (i, j) reads y_i and y_j only.
SkewGradientSystem mkdv_system(const GridConfig& grid,
                               const DifferenceOperators& ops);

enum class Problem { kdv, mkdv };

/// Benchmark initial profiles sampled at the grid points:
/// KdV  u(0,x) = 2 * 1.5^2 * sech^2(3x/2), mKdV u(0,x) = 2 sech(2x).
ColumnVector initial_profile(Problem problem, const GridConfig& grid);

}  // namespace skewmor

#endif
