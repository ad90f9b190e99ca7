#include "skewmor/problems.hpp"

#include <cmath>
#include <memory>

namespace skewmor {

GridConfig GridConfig::make(double length, Index n, std::optional<double> offset) {
  if (length <= 0.0 || n <= 0) {
    throw ConfigError("GridConfig: length and n must be positive");
  }
  GridConfig g;
  g.length = length;
  g.n = n;
  g.dx = length / static_cast<double>(n);
  g.offset = offset.value_or(-length / 2.0);
  return g;
}

DenseMatrix first_difference_matrix(Index n, double dx) {
  if (n < 3) {
    throw ConfigError("first_difference_matrix: n must be at least 3");
  }
  const double a = 1.0 / (2.0 * dx);
  DenseMatrix d1 = DenseMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    d1(i, (i + 1) % n) = a;
    d1(i, (i + n - 1) % n) = -a;
  }
  return d1;
}

DenseMatrix second_difference_matrix(Index n, double dx, D2Scaling scaling) {
  if (n < 3) {
    throw ConfigError("second_difference_matrix: n must be at least 3");
  }
  const double kappa =
      scaling == D2Scaling::standard ? 1.0 / (dx * dx) : 1.0 / (2.0 * dx);
  DenseMatrix d2 = DenseMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    d2(i, i) = -2.0 * kappa;
    d2(i, (i + 1) % n) = kappa;
    d2(i, (i + n - 1) % n) = kappa;
  }
  return d2;
}

DifferenceOperators central_diff_ops(const GridConfig& grid, D2Scaling scaling) {
  if (grid.n < 5) {
    throw ConfigError(
        "central_diff_ops: n < 5 makes the five-point d3 stencil wrap onto "
        "itself");
  }
  DifferenceOperators ops;
  ops.d1 = first_difference_matrix(grid.n, grid.dx);
  ops.d2 = second_difference_matrix(grid.n, grid.dx, scaling);
  ops.d3 = ops.d1 * ops.d2;
  ops.d2_scaling = scaling;
  return ops;
}

namespace {

struct OperatorRefs {
  std::shared_ptr<const DenseMatrix> d1;
  std::shared_ptr<const DenseMatrix> d3;
};

OperatorRefs share_operators(const DifferenceOperators& ops) {
  return {std::make_shared<DenseMatrix>(ops.d1),
          std::make_shared<DenseMatrix>(ops.d3)};
}

std::function<double(const ColumnVector&)> quadratic_energy() {
  return [](const ColumnVector& y) { return 0.5 * y.squaredNorm(); };
}

std::function<std::vector<Index>(Index, Index)> banded_stencil(
    std::shared_ptr<const DenseMatrix> d1) {
  return [d1](Index i, Index j) -> std::vector<Index> {
    if ((*d1)(i, j) == 0.0) return {};  // constant -D3 contribution only
    if (i == j) return {i};
    return {i, j};
  };
}

}  // namespace

SkewGradientSystem kdv_system(const GridConfig& grid,
                              const DifferenceOperators& ops) {
  const auto refs = share_operators(ops);
  const Index n = grid.n;

  SkewGradientSystem sys;
  sys.n = n;
  sys.s_kind = SKind::affine_in_y;
  sys.gradient_is_identity = true;
  sys.energy = quadratic_energy();
  sys.grad_h = [](const ColumnVector& y) { return y; };

  sys.s_matrix = [d1 = refs.d1, d3 = refs.d3](const ColumnVector& y) {
    DenseMatrix s = -(2.0 * (y.asDiagonal() * (*d1) + (*d1) * y.asDiagonal()) + (*d3));
    return s;
  };

  sys.affine_s = AffineSForm{-2.0 * ops.d1, -ops.d3};

  sys.s_entry = SEntryEvaluator{
      [d1 = refs.d1, d3 = refs.d3](Index i, Index j, const StateAccessor& y) {
        const double a = (*d1)(i, j);
        double value = -(*d3)(i, j);
        if (a != 0.0) value -= 2.0 * (y(i) + y(j)) * a;
        return value;
      },
      banded_stencil(refs.d1)};

  sys.rhs_jacobian = [d1 = refs.d1, d3 = refs.d3](const ColumnVector& y) {
    const ColumnVector d1y = (*d1) * y;
    DenseMatrix jac = -2.0 * DenseMatrix(d1y.asDiagonal());
    jac.noalias() -= 2.0 * (y.asDiagonal() * (*d1));
    jac.noalias() -= 4.0 * ((*d1) * y.asDiagonal());
    jac -= *d3;
    return jac;
  };

  return sys;
}

SkewGradientSystem mkdv_system(const GridConfig& grid,
                               const DifferenceOperators& ops) {
  const auto refs = share_operators(ops);
  const Index n = grid.n;

  SkewGradientSystem sys;
  sys.n = n;
  sys.s_kind = SKind::general;
  sys.gradient_is_identity = true;
  sys.energy = quadratic_energy();
  sys.grad_h = [](const ColumnVector& y) { return y; };

  sys.s_matrix = [d1 = refs.d1, d3 = refs.d3](const ColumnVector& y) {
    const ColumnVector y2 = y.array().square();
    DenseMatrix s = -(1.5 * (y2.asDiagonal() * (*d1) + (*d1) * y2.asDiagonal()) + (*d3));
    return s;
  };

  sys.s_entry = SEntryEvaluator{
      [d1 = refs.d1, d3 = refs.d3](Index i, Index j, const StateAccessor& y) {
        const double a = (*d1)(i, j);
        double value = -(*d3)(i, j);
        if (a != 0.0) {
          const double yi = y(i);
          const double yj = y(j);
          value -= 1.5 * (yi * yi + yj * yj) * a;
        }
        return value;
      },
      banded_stencil(refs.d1)};

  sys.rhs_jacobian = [d1 = refs.d1, d3 = refs.d3](const ColumnVector& y) {
    const ColumnVector d1y = (*d1) * y;
    const ColumnVector y2 = y.array().square();
    DenseMatrix jac = -3.0 * DenseMatrix((y.array() * d1y.array()).matrix().asDiagonal());
    jac.noalias() -= 1.5 * (y2.asDiagonal() * (*d1));
    jac.noalias() -= 4.5 * ((*d1) * y2.asDiagonal());
    jac -= *d3;
    return jac;
  };

  return sys;
}

ColumnVector initial_profile(Problem problem, const GridConfig& grid) {
  ColumnVector y0(grid.n);
  for (Index i = 0; i < grid.n; ++i) {
    const double x = grid.offset + static_cast<double>(i) * grid.dx;
    if (problem == Problem::kdv) {
      const double s = 1.0 / std::cosh(1.5 * x);
      y0[i] = 2.0 * 1.5 * 1.5 * s * s;
    } else {
      y0[i] = 2.0 / std::cosh(2.0 * x);
    }
  }
  return y0;
}

}  // namespace skewmor
