#include "skewmor/rom.hpp"

#include <cmath>
#include <memory>

#include "skewmor/la_core.hpp"

namespace skewmor {

namespace {

void require_skew(const DenseMatrix& d, const char* who) {
  if (d.rows() != d.cols()) {
    throw ShapeError(std::string(who) + ": matrix must be square");
  }
  const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
  const double asym = (d + d.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw ValidationError(std::string(who) + ": matrix is not skew-symmetric");
  }
}

DenseMatrix skew_part(const DenseMatrix& a) {
  return 0.5 * (a - a.transpose().eval());
}

}  // namespace

DtildeMatrix::DtildeMatrix(DenseMatrix d) : d_(std::move(d)) {
  require_skew(d_, "DtildeMatrix");
}

DenseMatrix DtildeMatrix::apply_as_matrix(const ColumnVector& y) const {
  if (y.size() != n()) {
    throw ShapeError("DtildeMatrix::apply: vector length mismatch");
  }
  return y.asDiagonal() * d_ + d_ * y.asDiagonal();
}

ColumnVector DtildeMatrix::apply(const ColumnVector& y) const {
  return vec(apply_as_matrix(y));
}

DtildeMatrix build_dtilde(const DenseMatrix& d) { return DtildeMatrix(d); }

LinearSOffline linear_s_offline(const PodBasis& v, const DenseMatrix& d,
                                const DenseMatrix* d_const,
                                std::size_t max_intermediate_bytes) {
  const Index n = v.v.rows();
  const Index r = v.rank();
  if (d.rows() != n) {
    throw ShapeError("linear_s_offline: D does not match the basis dimension");
  }
  const std::size_t intermediate_bytes =
      static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * sizeof(double);
  if (intermediate_bytes > max_intermediate_bytes) {
    throw MemoryBudgetError("linear_s_offline: n x n intermediate (" +
                            std::to_string(intermediate_bytes) +
                            " bytes) exceeds the configured budget");
  }
  const DtildeMatrix dtilde = build_dtilde(d);
  if (d_const) require_skew(*d_const, "linear_s_offline (D_c)");

  LinearSOffline out;
  out.m_lin.resize(r * r, r);
  for (Index c = 0; c < r; ++c) {
    const DenseMatrix block = dtilde.apply_as_matrix(v.v.col(c));
    const DenseMatrix projected =
        skew_part(unvec(apply_kron_transpose(v.v, v.v, vec(block)), r, r));
    out.m_lin.col(c) = vec(projected);
  }
  out.s_const_r = d_const ? skew_part(v.v.transpose() * (*d_const) * v.v)
                          : DenseMatrix::Zero(r, r);
  return out;
}

ColumnVector ReducedSystem::reduced_grad(const ColumnVector& z) const {
  if (full.gradient_is_identity) return z;
  return v.v.transpose() * full.grad_h(v.v * z);
}

double ReducedSystem::reduced_energy(const ColumnVector& z) const {
  return full.energy(v.v * z);
}

ColumnVector ReducedSystem::initial_condition(const ColumnVector& y0) const {
  if (y0.size() != v.v.rows()) {
    throw ShapeError("ReducedSystem: y0 does not match the basis dimension");
  }
  return v.v.transpose() * y0;
}

ColumnVector ReducedSystem::deim_entry_values(const ColumnVector& z) const {
  if (!deim_op || !full.s_entry) {
    throw ConfigError("ReducedSystem: no DEIM operator / entry evaluator");
  }
  const Index m = deim_op->sample_count();
  ColumnVector values(m);
  const StateAccessor lift = [this, &z](Index i) -> double {
    return v.v.row(i).dot(z);
  };
  for (Index k = 0; k < m; ++k) {
    const PatternEntry e = deim_op->selected_position(k);
    values[k] = full.s_entry->value(e.row, e.col, lift);
  }
  return values;
}

DenseMatrix ReducedSystem::s_reduced(const ColumnVector& z) const {
  switch (variant) {
    case RomVariant::skew_generic: {
      const ColumnVector y = v.v * z;
      return skew_part(v.v.transpose() * full.s_matrix(y) * v.v);
    }
    case RomVariant::linear_s_fast:
      return linear_s_online(*this, z);
    case RomVariant::skew_deim:
      return skew_deim_eval(*deim_op, deim_entry_values(z));
    case RomVariant::galerkin_generic:
      throw ConfigError("s_reduced: galerkin_generic has no reduced S matrix");
  }
  throw ConfigError("s_reduced: unknown variant");
}

ColumnVector ReducedSystem::rhs(const ColumnVector& z) const {
  if (z.size() != r) {
    throw ShapeError("ReducedSystem::rhs: z has wrong dimension");
  }
  if (variant == RomVariant::galerkin_generic) {
    const ColumnVector y = v.v * z;
    return v.v.transpose() * (full.s_matrix(y) * full.grad_h(y));
  }
  return s_reduced(z) * reduced_grad(z);
}

SkewGradientSystem ReducedSystem::as_skew_system() const {
  if (variant == RomVariant::galerkin_generic) {
    throw ConfigError(
        "as_skew_system: the generic Galerkin ROM is not a skew-gradient system");
  }
  const auto self = std::make_shared<const ReducedSystem>(*this);
  SkewGradientSystem sys;
  sys.n = r;
  sys.s_kind = SKind::general;
  sys.gradient_is_identity = full.gradient_is_identity;
  sys.s_matrix = [self](const ColumnVector& z) { return self->s_reduced(z); };
  sys.grad_h = [self](const ColumnVector& z) { return self->reduced_grad(z); };
  sys.energy = [self](const ColumnVector& z) { return self->reduced_energy(z); };
  sys.rhs_jacobian = jacobian_fn();
  return sys;
}

RhsFn ReducedSystem::rhs_fn() const {
  const auto self = std::make_shared<const ReducedSystem>(*this);
  return [self](const ColumnVector& z) { return self->rhs(z); };
}

JacobianFn ReducedSystem::jacobian_fn() const {
  if (variant != RomVariant::linear_s_fast || !full.gradient_is_identity) {
    return nullptr;
  }
  const auto self = std::make_shared<const ReducedSystem>(*this);
  return [self](const ColumnVector& z) -> DenseMatrix {
    // d/dz [S_r(z) z]: S_r(z) plus the columns unvec(m_lin e_k) z.
    DenseMatrix jac = linear_s_online(*self, z);
    const Index r = self->r;
    for (Index k = 0; k < r; ++k) {
      jac.col(k) += unvec(self->m_lin->col(k), r, r) * z;
    }
    return jac;
  };
}

DenseMatrix linear_s_online(const ReducedSystem& rs, const ColumnVector& z) {
  if (rs.variant != RomVariant::linear_s_fast || !rs.m_lin || !rs.s_const_r) {
    throw ConfigError("linear_s_online: reduced system lacks the offline tensors");
  }
  return unvec(*rs.m_lin * z, rs.r, rs.r) + *rs.s_const_r;
}

double reduced_energy(const ReducedSystem& rs, const ColumnVector& z) {
  return rs.reduced_energy(z);
}

ReducedSystem reduce(const SkewGradientSystem& sys, const PodBasis& v,
                     RomVariant variant, const RomBuildOptions& options,
                     const std::vector<ColumnVector>* snapshot_states) {
  if (v.v.rows() != sys.n) {
    throw ShapeError("reduce: basis rows do not match the system dimension");
  }
  ReducedSystem rs;
  rs.variant = variant;
  rs.r = v.rank();
  rs.v = v;
  rs.full = sys;

  switch (variant) {
    case RomVariant::galerkin_generic:
    case RomVariant::skew_generic:
      break;
    case RomVariant::linear_s_fast: {
      if (!sys.affine_s) {
        throw ConfigError(
            "reduce: linear_s_fast requires the affine decomposition of S");
      }
      LinearSOffline offline =
          linear_s_offline(v, sys.affine_s->d, &sys.affine_s->d_const,
                           options.max_intermediate_bytes);
      rs.m_lin = std::move(offline.m_lin);
      rs.s_const_r = std::move(offline.s_const_r);
      break;
    }
    case RomVariant::skew_deim: {
      if (!sys.s_entry) {
        throw ConfigError("reduce: skew_deim requires a per-entry S evaluator");
      }
      if (!snapshot_states || snapshot_states->empty()) {
        throw ConfigError("reduce: skew_deim requires snapshot states");
      }
      const Index m = options.deim_m.value_or(rs.r);
      const auto provider = [&sys, snapshot_states](Index k) -> DenseMatrix {
        return sys.s_matrix((*snapshot_states)[static_cast<std::size_t>(k)]);
      };
      rs.deim_op = skew_deim_build(provider,
                                   static_cast<Index>(snapshot_states->size()), m, v,
                                   sys.s_entry->stencil);
      break;
    }
  }
  return rs;
}

}  // namespace skewmor
