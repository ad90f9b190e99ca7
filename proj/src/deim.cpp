#include "skewmor/deim.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "skewmor/la_core.hpp"

namespace skewmor {

namespace {

Index argmax_abs(const ColumnVector& v) {
  Index best = 0;
  double best_abs = std::abs(v[0]);
  for (Index i = 1; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best_abs) {  // strict: ties keep the first index
      best_abs = a;
      best = i;
    }
  }
  return best;
}

}  // namespace

DeimSelection deim_select(const DenseMatrix& basis) {
  const Index n = basis.rows();
  const Index m = basis.cols();
  if (n == 0 || m == 0) {
    throw ShapeError("deim_select: empty basis");
  }
  if (m > n) {
    throw ShapeError("deim_select: more basis vectors than rows");
  }

  DeimSelection sel;
  sel.indices.reserve(static_cast<std::size_t>(m));

  Index rho = argmax_abs(basis.col(0));
  if (basis(rho, 0) == 0.0) {
    throw SelectionError("deim_select: first basis vector is zero");
  }
  sel.indices.push_back(rho);

  for (Index l = 1; l < m; ++l) {
    DenseMatrix ptu(l, l);
    ColumnVector ptu_rhs(l);
    for (Index i = 0; i < l; ++i) {
      const Index row = sel.indices[static_cast<std::size_t>(i)];
      for (Index j = 0; j < l; ++j) ptu(i, j) = basis(row, j);
      ptu_rhs[i] = basis(row, l);
    }
    Eigen::FullPivLU<DenseMatrix> lu(ptu);
    if (!lu.isInvertible()) {
      throw SelectionError("deim_select: singular P^T U at step " + std::to_string(l));
    }
    const ColumnVector c = lu.solve(ptu_rhs);
    const ColumnVector residual = basis.col(l) - basis.leftCols(l) * c;
    rho = argmax_abs(residual);
    if (residual[rho] == 0.0) {
      throw SelectionError("deim_select: zero residual at step " + std::to_string(l) +
                           " (dependent basis vectors)");
    }
    sel.indices.push_back(rho);
  }

  sel.p_t_u.resize(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      sel.p_t_u(i, j) = basis(sel.indices[static_cast<std::size_t>(i)], j);
    }
  }
  return sel;
}

DeimOperator build_deim_operator(const DenseMatrix& basis_u, const DenseMatrix& v) {
  if (v.rows() != basis_u.rows()) {
    throw ShapeError("build_deim_operator: V and U row counts differ");
  }
  DeimSelection sel = deim_select(basis_u);
  Eigen::FullPivLU<DenseMatrix> lu(sel.p_t_u);
  if (!lu.isInvertible()) {
    throw SelectionError("build_deim_operator: singular P^T U");
  }
  DeimOperator op;
  op.basis_u = basis_u;
  op.indices = std::move(sel.indices);
  // V^T U (P^T U)^{-1} via (P^T U)^T X^T = (V^T U)^T.
  const DenseMatrix vtu = v.transpose() * basis_u;
  op.projector =
      Eigen::FullPivLU<DenseMatrix>(sel.p_t_u.transpose()).solve(vtu.transpose()).transpose();
  return op;
}

ColumnVector deim_project(const DeimOperator& op, const ColumnVector& g_at_indices) {
  if (g_at_indices.size() != static_cast<Index>(op.indices.size())) {
    throw ShapeError("deim_project: expected " + std::to_string(op.indices.size()) +
                     " sampled entries");
  }
  return op.projector * g_at_indices;
}

double decomposition_defect(
    const AffineDecomposition& decomposition,
    const std::function<ColumnVector(const ColumnVector&)>& field,
    const std::vector<ColumnVector>& samples) {
  double worst = 0.0;
  for (const ColumnVector& y : samples) {
    const ColumnVector rebuilt = decomposition.linear * y + decomposition.nonlinear(y);
    worst = std::max(worst, (field(y) - rebuilt).cwiseAbs().maxCoeff());
  }
  return worst;
}

namespace {

double max_asymmetry(const DenseMatrix& s) {
  return (s + s.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace

SkewDeimOperator skew_deim_build(const SMatrixProvider& snapshot_at, Index count,
                                 Index m, const PodBasis& v,
                                 const StencilFn& stencil) {
  if (count < 1) {
    throw ConfigError("skew_deim_build: need at least one snapshot");
  }
  if (m < 1 || m > count) {
    throw ConfigError("skew_deim_build: m must satisfy 1 <= m <= snapshot count");
  }

  // Pass 1: validate skewness and take the union of nonzero positions.
  Index n = -1;
  std::vector<std::uint8_t> nonzero;
  for (Index k = 0; k < count; ++k) {
    const DenseMatrix s = snapshot_at(k);
    if (k == 0) {
      n = s.rows();
      nonzero.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    }
    if (s.rows() != n || s.cols() != n) {
      throw ShapeError("skew_deim_build: snapshot " + std::to_string(k) +
                       " is not n x n");
    }
    if (max_asymmetry(s) > 1e-12) {
      throw ValidationError("skew_deim_build: snapshot " + std::to_string(k) +
                            " is not skew-symmetric");
    }
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        if (s(i, j) != 0.0) {
          nonzero[static_cast<std::size_t>(j * n + i)] = 1;
        }
      }
    }
  }

  SkewDeimOperator op;
  op.n = n;
  op.r = v.rank();

  // Column-major pattern order, so pattern position q maps monotonically to
  // the vec index col*n + row.
  std::vector<Index> position_of(static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
                                 -1);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (nonzero[static_cast<std::size_t>(j * n + i)]) {
        position_of[static_cast<std::size_t>(j * n + i)] =
            static_cast<Index>(op.pattern.size());
        op.pattern.push_back({i, j});
      }
    }
  }
  const Index p = static_cast<Index>(op.pattern.size());
  if (p == 0) {
    throw ValidationError("skew_deim_build: all snapshots are identically zero");
  }

  // Involution q -> position of the transposed entry; exists because the
  // nonzero pattern of a skew matrix is symmetric.
  std::vector<Index> transpose_position(static_cast<std::size_t>(p));
  for (Index q = 0; q < p; ++q) {
    const PatternEntry e = op.pattern[static_cast<std::size_t>(q)];
    Index tq = position_of[static_cast<std::size_t>(e.row * n + e.col)];
    if (tq < 0) tq = q;  // asymmetric pattern can only come from sub-tolerance noise
    transpose_position[static_cast<std::size_t>(q)] = tq;
  }

  // Pass 2: compress the snapshots onto the pattern.
  DenseMatrix compressed(p, count);
  for (Index k = 0; k < count; ++k) {
    const DenseMatrix s = snapshot_at(k);
    for (Index q = 0; q < p; ++q) {
      const PatternEntry e = op.pattern[static_cast<std::size_t>(q)];
      compressed(q, k) = s(e.row, e.col);
    }
  }

  const SvdResult svd = svd_thin(compressed);
  op.s_singular_values = svd.singular_values;
  if (m > svd.singular_values.size() ||
      svd.singular_values[m - 1] <= 1e-14 * svd.singular_values[0]) {
    throw RankDeficiencyError(
        "skew_deim_build: snapshot matrix has numerical rank below m");
  }
  op.compressed_basis = svd.left.leftCols(m);

  // Enforce the skew structure exactly on each basis matrix; the singular
  // vectors already satisfy it up to roundoff.
  for (Index q = 0; q < p; ++q) {
    const Index tq = transpose_position[static_cast<std::size_t>(q)];
    if (tq == q) {
      op.compressed_basis.row(q).setZero();  // diagonal entries of a skew matrix
    } else if (q < tq) {
      for (Index j = 0; j < m; ++j) {
        const double half =
            0.5 * (op.compressed_basis(q, j) - op.compressed_basis(tq, j));
        op.compressed_basis(q, j) = half;
        op.compressed_basis(tq, j) = -half;
      }
    }
  }

  DeimSelection sel = deim_select(op.compressed_basis);
  op.indices = std::move(sel.indices);

  // B = U (P^T U)^{-1} expressed on the pattern.
  Eigen::FullPivLU<DenseMatrix> lu(sel.p_t_u);
  if (!lu.isInvertible()) {
    throw SelectionError("skew_deim_build: singular P^T U");
  }
  const DenseMatrix b = op.compressed_basis * lu.inverse();

  // W column j = vec(V^T B_j V), accumulated from the pattern entries so no
  // n x n matrix is ever formed here.
  const DenseMatrix& vmat = v.v;
  const Index r = op.r;
  op.online_tensor_w.resize(r * r, m);
  DenseMatrix accum(r, r);
  for (Index j = 0; j < m; ++j) {
    accum.setZero();
    for (Index q = 0; q < p; ++q) {
      const PatternEntry e = op.pattern[static_cast<std::size_t>(q)];
      accum.noalias() += b(q, j) * (vmat.row(e.row).transpose() * vmat.row(e.col));
    }
    accum = 0.5 * (accum - accum.transpose().eval());
    op.online_tensor_w.col(j) = vec(accum);
  }

  op.entry_dependencies.resize(static_cast<std::size_t>(m));
  if (stencil) {
    for (Index k = 0; k < m; ++k) {
      const PatternEntry e = op.selected_position(k);
      op.entry_dependencies[static_cast<std::size_t>(k)] = stencil(e.row, e.col);
    }
  }
  return op;
}

SkewDeimOperator skew_deim_build(const std::vector<DenseMatrix>& s_snapshots,
                                 Index m, const PodBasis& v,
                                 const StencilFn& stencil) {
  return skew_deim_build(
      [&s_snapshots](Index k) -> DenseMatrix {
        return s_snapshots[static_cast<std::size_t>(k)];
      },
      static_cast<Index>(s_snapshots.size()), m, v, stencil);
}

DenseMatrix skew_deim_eval(const SkewDeimOperator& op,
                           const ColumnVector& s_entries_at_indices) {
  if (s_entries_at_indices.size() != op.sample_count()) {
    throw ShapeError("skew_deim_eval: expected " + std::to_string(op.sample_count()) +
                     " sampled entries");
  }
  return unvec(op.online_tensor_w * s_entries_at_indices, op.r, op.r);
}

}  // namespace skewmor
