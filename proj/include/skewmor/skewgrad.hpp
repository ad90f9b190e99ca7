#ifndef SKEWMOR_SKEWGRAD_HPP
#define SKEWMOR_SKEWGRAD_HPP

#include <functional>
#include <optional>
#include <vector>

#include "skewmor/types.hpp"

namespace skewmor {

/// Structural class of S(y); drives which reduced-order construction
/// applies (see rom.hpp).
enum class SKind { constant, affine_in_y, general };

/// Read access to individual state coefficients.  Online reduced-order
/// evaluation passes an accessor that reconstructs (Vz)_i on demand, so a
/// per-entry evaluation never touches the whole n-vector.
using StateAccessor = std::function<double(Index)>;

/// Per-entry evaluator for S(y) with a declared dependency stencil: the
/// set of state indices entry (i, j) reads.  Both callables must be pure.
struct SEntryEvaluator {
  std::function<double(Index i, Index j, const StateAccessor&)> value;
  std::function<std::vector<Index>(Index i, Index j)> stencil;
};

/// Decomposition S(y) = Y D + D Y + D_c with D, D_c constant skew and
/// Y = diag(y); supplied by the problem definition when it exists.
struct AffineSForm {
  DenseMatrix d;
  DenseMatrix d_const;
};

/// Full-order model dy/dt = S(y) grad H(y) with S(y) skew-symmetric, so H
/// is a first integral of the exact flow.  All evaluators must be pure;
/// a system is then shareable across threads.
struct SkewGradientSystem {
  Index n = 0;
  std::function<DenseMatrix(const ColumnVector&)> s_matrix;
  std::function<ColumnVector(const ColumnVector&)> grad_h;
  std::function<double(const ColumnVector&)> energy;
  SKind s_kind = SKind::general;

  std::optional<SEntryEvaluator> s_entry;
  std::optional<AffineSForm> affine_s;

  /// Optional Jacobian of y -> S(y) grad H(y); used by implicit solvers
  /// when MidpointConfig requests a user-supplied Jacobian.
  std::function<DenseMatrix(const ColumnVector&)> rhs_jacobian;

  /// True when grad H(y) = y, in which case the reduced gradient collapses
  /// to the identity and the online stage never lifts to R^n.
  bool gradient_is_identity = false;
};

/// S(y) grad H(y).
ColumnVector rhs(const SkewGradientSystem& sys, const ColumnVector& y);

/// H(y).
double energy_of(const SkewGradientSystem& sys, const ColumnVector& y);

/// max_ij |S(y)_ij + S(y)_ji|; zero for exactly skew-symmetric S.
double check_skew(const SkewGradientSystem& sys, const ColumnVector& y);

}  // namespace skewmor

#endif
