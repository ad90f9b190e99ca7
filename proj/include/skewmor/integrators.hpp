#ifndef SKEWMOR_INTEGRATORS_HPP
#define SKEWMOR_INTEGRATORS_HPP

#include <functional>
#include <vector>

#include "skewmor/skewgrad.hpp"
#include "skewmor/types.hpp"

namespace skewmor {

using RhsFn = std::function<ColumnVector(const ColumnVector&)>;
using JacobianFn = std::function<DenseMatrix(const ColumnVector&)>;
using EnergyFn = std::function<double(const ColumnVector&)>;

enum class JacobianMode { finite_difference, user_supplied };

struct MidpointConfig {
  double dt = 0.0;
  double newton_tol = 1e-12;        // residual 2-norm threshold
  int newton_max_iter = 50;
  JacobianMode jacobian = JacobianMode::finite_difference;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ColumnVector> states;
  std::vector<double> energies;

  Index size() const { return static_cast<Index>(states.size()); }
};

struct ButcherTableau {
  DenseMatrix a;
  ColumnVector b;
  ColumnVector c;
};

ButcherTableau midpoint_tableau();
ButcherTableau rk4_tableau();
ButcherTableau gauss2_tableau();

struct QuadraticInvariantCheck {
  bool satisfied = false;
  double max_violation = 0.0;
};

/// Checks b_i a_ij + b_j a_ji = b_i b_j for all stage pairs; methods with
/// this property preserve every quadratic invariant.
QuadraticInvariantCheck satisfies_quadratic_invariant_condition(
    const ButcherTableau& tableau);

/// Damped-free Newton on F(x) = 0.  The Jacobian is the supplied evaluator
/// when given, otherwise central finite differences with perturbation
/// sqrt(eps) * (1 + |x_i|).  The factorization is reused across iterations
/// and refreshed when the residual reduction stalls.
ColumnVector newton_solve(const RhsFn& residual, const ColumnVector& x0,
                          double tol, int max_iter,
                          const JacobianFn& jacobian = nullptr);

/// One implicit midpoint step: solves y+ = y + dt f((y+ + y)/2).  Preserves
/// every quadratic invariant of f up to the Newton tolerance.  f_jacobian
/// is the Jacobian of f, consulted only in user_supplied mode.
ColumnVector midpoint_step(const RhsFn& f, const ColumnVector& y,
                           const MidpointConfig& cfg,
                           const JacobianFn& f_jacobian = nullptr);

/// Classical explicit RK4 step (energy-drifting baseline).
ColumnVector rk4_step(const RhsFn& f, const ColumnVector& y, double dt);

/// Midpoint time stepping with recording every record_every steps (state 0
/// included): the trajectory has steps/record_every + 1 entries.  Energies
/// come from the system's H.  Step failures are rethrown annotated with the
/// step index.
Trajectory integrate(const SkewGradientSystem& sys, const ColumnVector& y0,
                     const MidpointConfig& cfg, long steps,
                     long record_every = 1);

/// Same for a bare vector field; energies use the supplied evaluator when
/// given and are zero otherwise.
Trajectory integrate(const RhsFn& f, const ColumnVector& y0,
                     const MidpointConfig& cfg, long steps,
                     long record_every = 1, const EnergyFn& energy = nullptr,
                     const JacobianFn& f_jacobian = nullptr);

}  // namespace skewmor

#endif
