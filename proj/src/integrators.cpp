#include "skewmor/integrators.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>

namespace skewmor {

ButcherTableau midpoint_tableau() {
  ButcherTableau t;
  t.a = DenseMatrix::Constant(1, 1, 0.5);
  t.b = ColumnVector::Constant(1, 1.0);
  t.c = ColumnVector::Constant(1, 0.5);
  return t;
}

ButcherTableau rk4_tableau() {
  ButcherTableau t;
  t.a = DenseMatrix::Zero(4, 4);
  t.a(1, 0) = 0.5;
  t.a(2, 1) = 0.5;
  t.a(3, 2) = 1.0;
  t.b = ColumnVector(4);
  t.b << 1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0;
  t.c = ColumnVector(4);
  t.c << 0.0, 0.5, 0.5, 1.0;
  return t;
}

ButcherTableau gauss2_tableau() {
  const double s = std::sqrt(3.0) / 6.0;
  ButcherTableau t;
  t.a = DenseMatrix(2, 2);
  t.a << 0.25, 0.25 - s, 0.25 + s, 0.25;
  t.b = ColumnVector::Constant(2, 0.5);
  t.c = ColumnVector(2);
  t.c << 0.5 - s, 0.5 + s;
  return t;
}

QuadraticInvariantCheck satisfies_quadratic_invariant_condition(
    const ButcherTableau& tableau) {
  const Index s = tableau.b.size();
  QuadraticInvariantCheck out;
  for (Index i = 0; i < s; ++i) {
    for (Index j = 0; j < s; ++j) {
      const double violation = tableau.b[i] * tableau.a(i, j) +
                               tableau.b[j] * tableau.a(j, i) -
                               tableau.b[i] * tableau.b[j];
      out.max_violation = std::max(out.max_violation, std::abs(violation));
    }
  }
  out.satisfied = out.max_violation <= 1e-14;
  return out;
}

namespace {

DenseMatrix fd_jacobian(const RhsFn& residual, const ColumnVector& x) {
  const Index n = x.size();
  const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  DenseMatrix jac(n, n);
  ColumnVector xp = x;
  ColumnVector xm = x;
  for (Index j = 0; j < n; ++j) {
    const double h = sqrt_eps * (1.0 + std::abs(x[j]));
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    jac.col(j) = (residual(xp) - residual(xm)) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return jac;
}

}  // namespace

ColumnVector newton_solve(const RhsFn& residual, const ColumnVector& x0,
                          double tol, int max_iter,
                          const JacobianFn& jacobian) {
  if (tol <= 0.0 || max_iter < 1) {
    throw ConfigError("newton_solve: tol must be positive and max_iter >= 1");
  }
  ColumnVector x = x0;
  ColumnVector fx = residual(x);
  double rnorm = fx.norm();
  if (rnorm <= tol) return x;

  Eigen::PartialPivLU<DenseMatrix> lu;
  bool have_factorization = false;
  bool refresh = true;

  for (int iter = 1; iter <= max_iter; ++iter) {
    if (refresh || !have_factorization) {
      const DenseMatrix jac = jacobian ? jacobian(x) : fd_jacobian(residual, x);
      lu.compute(jac);
      if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() == 0.0) {
        throw SingularMatrixError("newton_solve: singular Jacobian");
      }
      have_factorization = true;
      refresh = false;
    }
    const ColumnVector dx = lu.solve(fx);
    if (!dx.allFinite()) {
      throw SingularMatrixError("newton_solve: linear solve produced non-finite step");
    }
    x -= dx;
    fx = residual(x);
    const double rnew = fx.norm();
    if (!std::isfinite(rnew)) {
      throw ConvergenceError("newton_solve: residual became non-finite", rnew, iter);
    }
    if (rnew <= tol) return x;
    // Frozen factorization as long as convergence stays fast.
    refresh = rnew > 0.2 * rnorm;
    rnorm = rnew;
  }
  throw ConvergenceError("newton_solve: no convergence after " +
                             std::to_string(max_iter) + " iterations (residual " +
                             std::to_string(rnorm) + ")",
                         rnorm, max_iter);
}

ColumnVector midpoint_step(const RhsFn& f, const ColumnVector& y,
                           const MidpointConfig& cfg,
                           const JacobianFn& f_jacobian) {
  if (cfg.dt == 0.0) {
    throw ConfigError("midpoint_step: dt must be nonzero");
  }
  if (cfg.jacobian == JacobianMode::user_supplied && !f_jacobian) {
    throw ConfigError("midpoint_step: user_supplied Jacobian mode without a Jacobian");
  }
  const double dt = cfg.dt;
  const auto residual = [&](const ColumnVector& x) -> ColumnVector {
    return x - y - dt * f(0.5 * (x + y));
  };
  JacobianFn newton_jacobian;
  if (cfg.jacobian == JacobianMode::user_supplied) {
    newton_jacobian = [&](const ColumnVector& x) -> DenseMatrix {
      DenseMatrix jac = -0.5 * dt * f_jacobian(0.5 * (x + y));
      jac.diagonal().array() += 1.0;
      return jac;
    };
  }
  return newton_solve(residual, y, cfg.newton_tol, cfg.newton_max_iter,
                      newton_jacobian);
}

ColumnVector rk4_step(const RhsFn& f, const ColumnVector& y, double dt) {
  const ColumnVector k1 = f(y);
  const ColumnVector k2 = f(y + 0.5 * dt * k1);
  const ColumnVector k3 = f(y + 0.5 * dt * k2);
  const ColumnVector k4 = f(y + dt * k3);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

Trajectory integrate_impl(const RhsFn& f, const ColumnVector& y0,
                          const MidpointConfig& cfg, long steps,
                          long record_every, const EnergyFn& energy,
                          const JacobianFn& f_jacobian) {
  if (steps < 1) {
    throw ConfigError("integrate: steps must be >= 1");
  }
  if (record_every < 1) {
    throw ConfigError("integrate: record_every must be >= 1");
  }
  Trajectory traj;
  traj.times.reserve(steps / record_every + 1);
  traj.states.reserve(steps / record_every + 1);
  traj.energies.reserve(steps / record_every + 1);

  const auto record = [&](long k, const ColumnVector& y) {
    traj.times.push_back(static_cast<double>(k) * cfg.dt);
    traj.states.push_back(y);
    traj.energies.push_back(energy ? energy(y) : 0.0);
  };

  ColumnVector y = y0;
  record(0, y);
  for (long k = 1; k <= steps; ++k) {
    try {
      y = midpoint_step(f, y, cfg, f_jacobian);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("integrate: step " + std::to_string(k) + ": " + e.what(),
                             e.last_residual, e.iterations);
    } catch (const SingularMatrixError& e) {
      throw SingularMatrixError("integrate: step " + std::to_string(k) + ": " +
                                e.what());
    }
    if (k % record_every == 0) record(k, y);
  }
  return traj;
}

}  // namespace

Trajectory integrate(const SkewGradientSystem& sys, const ColumnVector& y0,
                     const MidpointConfig& cfg, long steps, long record_every) {
  if (y0.size() != sys.n) {
    throw ShapeError("integrate: initial state does not match system dimension");
  }
  const RhsFn f = [&sys](const ColumnVector& y) { return rhs(sys, y); };
  const EnergyFn energy = [&sys](const ColumnVector& y) { return sys.energy(y); };
  JacobianFn jac;
  if (cfg.jacobian == JacobianMode::user_supplied) {
    if (!sys.rhs_jacobian) {
      throw ConfigError("integrate: system does not provide an rhs Jacobian");
    }
    jac = sys.rhs_jacobian;
  }
  return integrate_impl(f, y0, cfg, steps, record_every, energy, jac);
}

Trajectory integrate(const RhsFn& f, const ColumnVector& y0,
                     const MidpointConfig& cfg, long steps, long record_every,
                     const EnergyFn& energy, const JacobianFn& f_jacobian) {
  return integrate_impl(f, y0, cfg, steps, record_every, energy, f_jacobian);
}

}  // namespace skewmor
