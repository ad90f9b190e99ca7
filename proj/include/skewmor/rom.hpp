#ifndef SKEWMOR_ROM_HPP
#define SKEWMOR_ROM_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "skewmor/deim.hpp"
#include "skewmor/integrators.hpp"
#include "skewmor/pod.hpp"
#include "skewmor/skewgrad.hpp"
#include "skewmor/types.hpp"

namespace skewmor {

/// The n^2 x n matrix with vec(Y D + D Y) = Dtilde y for Y = diag(y).
/// Column k carries column k of D in block k minus row k of D spread over
/// the strided diagonal positions, so it is never stored densely; only D
/// itself is kept.
class DtildeMatrix {
 public:
  explicit DtildeMatrix(DenseMatrix d);

  Index n() const { return d_.rows(); }
  const DenseMatrix& d() const { return d_; }

  /// Y D + D Y as an n x n matrix (the unvec'd product Dtilde y).
  DenseMatrix apply_as_matrix(const ColumnVector& y) const;

  /// Dtilde y in R^{n^2}; intended for small n (tests, oracles).
  ColumnVector apply(const ColumnVector& y) const;

 private:
  DenseMatrix d_;
};

/// Validates skewness of d and wraps it.
DtildeMatrix build_dtilde(const DenseMatrix& d);

constexpr std::size_t kDefaultIntermediateBudgetBytes = std::size_t{1} << 30;

struct LinearSOffline {
  DenseMatrix m_lin;      // r^2 x r  =  (V (x) V)^T Dtilde V
  DenseMatrix s_const_r;  // r x r    =  V^T D_c V (zero when absent), skew
};

/// Offline tensors for S(y) = Y D + D Y + D_c, assembled column-by-column
/// through apply_kron_transpose; the only large intermediate is one n x n
/// matrix per basis column, refused above the byte budget.
LinearSOffline linear_s_offline(
    const PodBasis& v, const DenseMatrix& d, const DenseMatrix* d_const = nullptr,
    std::size_t max_intermediate_bytes = kDefaultIntermediateBudgetBytes);

enum class RomVariant { galerkin_generic, skew_generic, linear_s_fast, skew_deim };

struct RomBuildOptions {
  std::optional<Index> deim_m;  // defaults to r
  std::size_t max_intermediate_bytes = kDefaultIntermediateBudgetBytes;
};

/// r-dimensional reduced model.  The three skew variants evaluate an
/// exactly skew-symmetric S_r(z), so H(Vz) is a first integral of the
/// reduced flow; galerkin_generic is the plain (non-structure-preserving)
/// Galerkin baseline.
struct ReducedSystem {
  RomVariant variant = RomVariant::skew_generic;
  Index r = 0;
  PodBasis v;
  std::optional<DenseMatrix> m_lin;
  std::optional<DenseMatrix> s_const_r;
  std::optional<SkewDeimOperator> deim_op;
  SkewGradientSystem full;

  ColumnVector rhs(const ColumnVector& z) const;

  /// S_r(z) for the skew variants; galerkin_generic has no reduced S.
  DenseMatrix s_reduced(const ColumnVector& z) const;

  /// V^T grad H(V z); collapses to z when grad H is the identity, keeping
  /// the online stage free of any n-sized vector.
  ColumnVector reduced_grad(const ColumnVector& z) const;

  /// H(V z).
  double reduced_energy(const ColumnVector& z) const;

  /// z_0 = V^T y_0.
  ColumnVector initial_condition(const ColumnVector& y0) const;

  /// The sampled S-entries for the skew_deim variant, evaluated through the
  /// per-entry evaluator; each read of a state coefficient costs O(r).
  ColumnVector deim_entry_values(const ColumnVector& z) const;

  /// Presents the reduced model as a SkewGradientSystem of dimension r for
  /// the integrators.  galerkin_generic is not a skew-gradient system and
  /// throws ConfigError; integrate its rhs directly instead.
  SkewGradientSystem as_skew_system() const;

  RhsFn rhs_fn() const;

  /// Analytic Jacobian of the reduced rhs; available for linear_s_fast with
  /// identity gradient, null otherwise (finite differences apply then).
  JacobianFn jacobian_fn() const;
};

/// S_r(z) = unvec(m_lin z) + s_const_r; O(r^3), independent of n.
DenseMatrix linear_s_online(const ReducedSystem& rs, const ColumnVector& z);

/// Free-function form of ReducedSystem::reduced_energy.
double reduced_energy(const ReducedSystem& rs, const ColumnVector& z);

/// Builds the reduced model.  linear_s_fast requires the system's affine
/// decomposition; skew_deim requires the per-entry evaluator plus the
/// snapshot states the S-snapshots are taken at.
ReducedSystem reduce(const SkewGradientSystem& sys, const PodBasis& v,
                     RomVariant variant, const RomBuildOptions& options = {},
                     const std::vector<ColumnVector>* snapshot_states = nullptr);

}  // namespace skewmor

#endif
