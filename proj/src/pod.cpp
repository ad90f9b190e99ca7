#include "skewmor/pod.hpp"

#include "skewmor/la_core.hpp"

namespace skewmor {

PodTruncation PodTruncation::fixed_rank(Index r) {
  if (r < 1) throw ConfigError("PodTruncation: rank must be >= 1");
  PodTruncation t;
  t.r = r;
  return t;
}

PodTruncation PodTruncation::energy(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ConfigError("PodTruncation: epsilon must lie in (0, 1)");
  }
  PodTruncation t;
  t.eps = epsilon;
  return t;
}

SnapshotSet assemble_snapshots(const Trajectory& traj,
                               const SkewGradientSystem& sys, bool augment,
                               double mu) {
  if (traj.states.empty()) {
    throw ConfigError("assemble_snapshots: empty trajectory");
  }
  if (augment && mu <= 0.0) {
    throw ConfigError("assemble_snapshots: mu must be positive");
  }
  const Index n = traj.states.front().size();
  const Index s = traj.size();

  SnapshotSet set;
  set.n_state_snapshots = s;
  set.augmented = augment;
  set.mu = mu;
  set.matrix.resize(n, augment ? 2 * s : s);
  for (Index j = 0; j < s; ++j) {
    set.matrix.col(j) = traj.states[static_cast<std::size_t>(j)];
  }
  if (augment) {
    for (Index j = 0; j < s; ++j) {
      set.matrix.col(s + j) = mu * sys.grad_h(traj.states[static_cast<std::size_t>(j)]);
    }
  }
  return set;
}

PodBasis pod_basis(const SnapshotSet& snapshots, const PodTruncation& truncation) {
  return pod_basis(snapshots.matrix, truncation);
}

PodBasis pod_basis(const DenseMatrix& snapshot_matrix,
                   const PodTruncation& truncation) {
  if (!truncation.r.has_value() && !truncation.eps.has_value()) {
    throw ConfigError("pod_basis: truncation rule not set");
  }
  const SvdResult svd = svd_thin(snapshot_matrix);
  const ColumnVector& sigma = svd.singular_values;
  const Index d = sigma.size();
  const double total_energy = sigma.squaredNorm();

  // Numerical rank: singular values at or below 1e-14 sigma_1 count as zero.
  Index numerical_rank = 0;
  const double floor = 1e-14 * sigma[0];
  for (Index j = 0; j < d; ++j) {
    if (sigma[j] > floor && sigma[j] > 0.0) ++numerical_rank;
  }

  Index r = 0;
  if (truncation.r.has_value()) {
    r = *truncation.r;
    if (r > numerical_rank) {
      throw RankDeficiencyError("pod_basis: requested rank " + std::to_string(r) +
                                " exceeds numerical rank " +
                                std::to_string(numerical_rank));
    }
  } else {
    const double eps = *truncation.eps;
    double tail = total_energy;
    r = numerical_rank;  // fallback when eps is below the representable tail
    for (Index j = 0; j < numerical_rank; ++j) {
      tail -= sigma[j] * sigma[j];
      if (tail / total_energy < eps) {
        r = j + 1;
        break;
      }
    }
  }

  PodBasis basis;
  basis.v = svd.left.leftCols(r);
  basis.retained_singular_values = sigma.head(r);
  basis.spectrum = sigma;
  basis.discarded_energy =
      (total_energy - sigma.head(r).squaredNorm()) / total_energy;
  basis.epsilon = truncation.eps;
  return basis;
}

double projection_residual(const DenseMatrix& y, const DenseMatrix& v) {
  if (v.size() == 0) {
    return y.squaredNorm();  // r = 0: nothing is captured
  }
  if (v.rows() != y.rows()) {
    throw ShapeError("projection_residual: row counts differ");
  }
  const DenseMatrix coefficients = v.transpose() * y;
  return (y - v * coefficients).squaredNorm();
}

}  // namespace skewmor
