#ifndef SKEWMOR_DEIM_HPP
#define SKEWMOR_DEIM_HPP

#include <functional>
#include <vector>

#include "skewmor/pod.hpp"
#include "skewmor/skewgrad.hpp"
#include "skewmor/types.hpp"

namespace skewmor {

/// Output of the greedy interpolation-index selection: the chosen row
/// indices (0-based) and the square matrix P^T U they induce.
struct DeimSelection {
  std::vector<Index> indices;
  DenseMatrix p_t_u;  // m x m, nonsingular on success
};

/// Greedy index selection: index l maximizes |u_l - U c| with c solving
/// (P^T U) c = P^T u_l over the previously selected rows; ties go to the
/// lowest index.  Throws SelectionError when the residual vanishes (basis
/// columns dependent) or P^T U becomes singular.
DeimSelection deim_select(const DenseMatrix& basis);

struct DeimOperator {
  DenseMatrix basis_u;         // n x m
  std::vector<Index> indices;  // m distinct rows, 0-based
  DenseMatrix projector;       // r x m  =  V^T U (P^T U)^{-1}
};

/// Runs deim_select on basis_u and precomputes the oblique projector
/// against the reduced basis v.
DeimOperator build_deim_operator(const DenseMatrix& basis_u, const DenseMatrix& v);

/// projector * g_at_indices; approximates V^T g from the m sampled entries
/// at cost O(r m).
ColumnVector deim_project(const DeimOperator& op, const ColumnVector& g_at_indices);

/// Split f(y) = A y + g(y) of a vector field into its constant-coefficient
/// linear part and the nonlinear remainder; interpolatory projection targets
/// only g.  The per-entry evaluator and stencil are optional (null when the
/// field has no cheap entrywise form).
struct AffineDecomposition {
  DenseMatrix linear;  // A
  std::function<ColumnVector(const ColumnVector&)> nonlinear;  // g
  std::function<double(Index, const StateAccessor&)> nonlinear_entry;
  std::function<std::vector<Index>(Index)> nonlinear_stencil;
};

/// max |f(y) - (A y + g(y))| over the sample states; a valid decomposition
/// reproduces the field to roundoff.
double decomposition_defect(const AffineDecomposition& decomposition,
                            const std::function<ColumnVector(const ColumnVector&)>& field,
                            const std::vector<ColumnVector>& samples);

struct PatternEntry {
  Index row = 0;
  Index col = 0;
};

/// Interpolatory approximation of a skew-symmetric matrix field
/// S(t) ~ sum_j U_j c_j(t), with everything stored on the compressed
/// nonzero pattern and the online tensor W = (V (x) V)^T U (P^T U)^{-1}
/// assembled offline.
struct SkewDeimOperator {
  Index n = 0;                            // full-order dimension
  Index r = 0;                            // reduced dimension
  std::vector<PatternEntry> pattern;      // nonzero positions, column-major order
  DenseMatrix compressed_basis;           // p x m, rows follow `pattern`
  std::vector<Index> indices;             // m positions into `pattern`
  DenseMatrix online_tensor_w;            // r^2 x m
  std::vector<std::vector<Index>> entry_dependencies;  // per selected position
  ColumnVector s_singular_values;         // spectrum of the compressed snapshots

  Index sample_count() const { return static_cast<Index>(indices.size()); }
  PatternEntry selected_position(Index k) const {
    return pattern[static_cast<std::size_t>(indices[static_cast<std::size_t>(k)])];
  }
};

/// k -> S(y_k); lets callers stream the S-snapshots instead of holding
/// `count` dense n x n matrices at once.
using SMatrixProvider = std::function<DenseMatrix(Index)>;
using StencilFn = std::function<std::vector<Index>(Index, Index)>;

/// Builds the operator from s-snapshots: each snapshot must be skew within
/// 1e-12; the pattern is the union of exactly-nonzero positions; the SVD
/// runs on the p x s compressed matrix (p is typically ~4n for banded S,
/// never n^2).
SkewDeimOperator skew_deim_build(const SMatrixProvider& snapshot_at, Index count,
                                 Index m, const PodBasis& v,
                                 const StencilFn& stencil = nullptr);
SkewDeimOperator skew_deim_build(const std::vector<DenseMatrix>& s_snapshots,
                                 Index m, const PodBasis& v,
                                 const StencilFn& stencil = nullptr);

/// unvec(W s, r, r) for the m sampled S-entries; the output is skew-
/// symmetric by construction for any input.
DenseMatrix skew_deim_eval(const SkewDeimOperator& op,
                           const ColumnVector& s_entries_at_indices);

}  // namespace skewmor

#endif
