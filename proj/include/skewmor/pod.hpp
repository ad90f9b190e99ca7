#ifndef SKEWMOR_POD_HPP
#define SKEWMOR_POD_HPP

#include <optional>

#include "skewmor/integrators.hpp"
#include "skewmor/skewgrad.hpp"
#include "skewmor/types.hpp"

namespace skewmor {

struct SnapshotSet {
  DenseMatrix matrix;           // n x s (or n x 2s when augmented)
  Index n_state_snapshots = 0;  // s
  bool augmented = false;
  double mu = 1.0;
};

struct PodBasis {
  DenseMatrix v;                         // n x r, orthonormal columns
  ColumnVector retained_singular_values; // length r, nonincreasing, > 0
  double discarded_energy = 0.0;         // sum_{j>r} sigma_j^2 / sum_j sigma_j^2
  std::optional<double> epsilon;         // set when built in energy mode
  ColumnVector spectrum;                 // all singular values, for reporting

  Index rank() const { return v.cols(); }
};

/// Rank/energy truncation rule for pod_basis.
struct PodTruncation {
  static PodTruncation fixed_rank(Index r);
  static PodTruncation energy(double epsilon);

  std::optional<Index> r;
  std::optional<double> eps;
};

/// Snapshot matrix [y_0 .. y_s] from a trajectory, optionally augmented
/// with the scaled gradients [.., mu grad H(y_0) .. mu grad H(y_s)].
SnapshotSet assemble_snapshots(const Trajectory& traj,
                               const SkewGradientSystem& sys,
                               bool augment = false, double mu = 1.0);

/// First r left singular vectors of the snapshot matrix.  In energy mode r
/// is the smallest integer with discarded energy below epsilon.  Requesting
/// a rank past the numerical rank (sigma_r <= 1e-14 sigma_1) throws
/// RankDeficiencyError.
PodBasis pod_basis(const SnapshotSet& snapshots, const PodTruncation& truncation);
PodBasis pod_basis(const DenseMatrix& snapshot_matrix, const PodTruncation& truncation);

/// sum_j || y_j - V V^T y_j ||^2; for a POD basis this equals the sum of
/// the discarded squared singular values.
double projection_residual(const DenseMatrix& y, const DenseMatrix& v);

}  // namespace skewmor

#endif
