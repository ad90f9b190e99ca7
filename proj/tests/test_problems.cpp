#include <doctest.h>

#include <cmath>

#include "skewmor/problems.hpp"
#include "test_support.hpp"

using namespace skewmor;

TEST_SUITE("problems") {

TEST_CASE("first difference matrix has the central stencil with wrap") {
  // n = 4, dx = 0.5: prefactor 1/(2 dx) = 1, so row 1 reads [0, 1, 0, -1].
  const DenseMatrix d1 = first_difference_matrix(4, 0.5);
  CHECK(d1(0, 0) == 0.0);
  CHECK(d1(0, 1) == 1.0);
  CHECK(d1(0, 2) == 0.0);
  CHECK(d1(0, 3) == -1.0);
  CHECK(d1(3, 0) == 1.0);

  // Exactly skew by construction.
  CHECK(test::max_abs(d1 + d1.transpose()) == 0.0);
}

TEST_CASE("difference operators annihilate constants") {
  const GridConfig grid = GridConfig::make(20.0, 16);
  const DifferenceOperators ops = central_diff_ops(grid);
  const ColumnVector ones = ColumnVector::Ones(16);
  CHECK(test::max_abs(ops.d1 * ones) == 0.0);
  CHECK(test::max_abs(ops.d2 * ones) < 1e-11);
  CHECK(test::max_abs(ops.d3 * ones) < 1e-11);
  for (Index i = 0; i < 16; ++i) {
    CHECK(std::abs(ops.d1.row(i).sum()) < 1e-11);
    CHECK(std::abs(ops.d2.row(i).sum()) < 1e-11);
    CHECK(std::abs(ops.d3.row(i).sum()) < 1e-11);
  }
}

TEST_CASE("d3 equals the dense product and is skew") {
  const GridConfig grid = GridConfig::make(8.0, 8);
  const DifferenceOperators ops = central_diff_ops(grid);
  const DenseMatrix product = ops.d1 * ops.d2;
  CHECK(test::max_abs(ops.d3 - product) == 0.0);
  CHECK(test::max_abs(ops.d3 + ops.d3.transpose()) < 1e-12);
}

TEST_CASE("d2 scaling modes") {
  const GridConfig grid = GridConfig::make(20.0, 10);  // dx = 2
  const DenseMatrix standard = second_difference_matrix(10, grid.dx, D2Scaling::standard);
  const DenseMatrix literal =
      second_difference_matrix(10, grid.dx, D2Scaling::paper_literal);
  CHECK(standard(0, 0) == doctest::Approx(-2.0 / 4.0));
  CHECK(literal(0, 0) == doctest::Approx(-2.0 / 4.0));  // coincide only at dx = 2
  const GridConfig fine = GridConfig::make(20.0, 500);  // dx = 0.04
  const DenseMatrix s2 = second_difference_matrix(500, fine.dx, D2Scaling::standard);
  const DenseMatrix l2 = second_difference_matrix(500, fine.dx, D2Scaling::paper_literal);
  CHECK(s2(0, 1) == doctest::Approx(625.0));
  CHECK(l2(0, 1) == doctest::Approx(12.5));
}

TEST_CASE("central_diff_ops rejects n below the stencil width") {
  CHECK_THROWS_AS(central_diff_ops(GridConfig::make(1.0, 4)), ConfigError);
}

TEST_CASE("KdV S at zero state is -D3 and annihilates constants") {
  const GridConfig grid = GridConfig::make(20.0, 16);
  const DifferenceOperators ops = central_diff_ops(grid);
  const SkewGradientSystem sys = kdv_system(grid, ops);

  CHECK(test::max_abs(sys.s_matrix(ColumnVector::Zero(16)) + ops.d3) == 0.0);

  // At y = 1: S(y) 1 = -(2(Y D1 + D1 Y) + D3) 1 = 0 since every operator
  // kills constants and Y = I.
  const ColumnVector ones = ColumnVector::Ones(16);
  CHECK(test::max_abs(rhs(sys, ones)) < 1e-11);

  auto gen = test::rng(51);
  for (int rep = 0; rep < 20; ++rep) {
    CHECK(check_skew(sys, test::random_vector(gen, 16)) <= 1e-12);
  }
}

TEST_CASE("mKdV S properties") {
  const GridConfig grid = GridConfig::make(10.0, 12);
  const DifferenceOperators ops = central_diff_ops(grid);
  const SkewGradientSystem sys = mkdv_system(grid, ops);

  CHECK(test::max_abs(sys.s_matrix(ColumnVector::Zero(12)) + ops.d3) == 0.0);

  auto gen = test::rng(52);
  const ColumnVector y = test::random_vector(gen, 12);
  CHECK(test::max_abs(sys.s_matrix(y) - sys.s_matrix((-y).eval())) == 0.0);

  // rhs at constant states vanishes (both problems annihilate constants).
  const ColumnVector alpha = 0.7 * ColumnVector::Ones(12);
  CHECK(test::max_abs(rhs(sys, alpha)) < 1e-10);
}

TEST_CASE("per-entry evaluators match the dense matrices") {
  auto gen = test::rng(53);
  const GridConfig grid = GridConfig::make(10.0, 12);
  const DifferenceOperators ops = central_diff_ops(grid);
  for (const Problem problem : {Problem::kdv, Problem::mkdv}) {
    const SkewGradientSystem sys =
        problem == Problem::kdv ? kdv_system(grid, ops) : mkdv_system(grid, ops);
    REQUIRE(sys.s_entry.has_value());
    const ColumnVector y = test::random_vector(gen, 12);
    const DenseMatrix dense = sys.s_matrix(y);
    const StateAccessor acc = [&y](Index i) { return y[i]; };
    for (Index i = 0; i < 12; ++i) {
      for (Index j = 0; j < 12; ++j) {
        CHECK(std::abs(sys.s_entry->value(i, j, acc) - dense(i, j)) < 1e-14);
        const auto deps = sys.s_entry->stencil(i, j);
        if (ops.d1(i, j) != 0.0) {
          REQUIRE(deps.size() == 2);
          CHECK(deps[0] == i);
          CHECK(deps[1] == j);
        } else {
          CHECK(deps.empty());
        }
      }
    }
  }
}

TEST_CASE("analytic rhs Jacobians match finite differences") {
  auto gen = test::rng(54);
  const GridConfig grid = GridConfig::make(10.0, 10);
  const DifferenceOperators ops = central_diff_ops(grid);
  for (const Problem problem : {Problem::kdv, Problem::mkdv}) {
    const SkewGradientSystem sys =
        problem == Problem::kdv ? kdv_system(grid, ops) : mkdv_system(grid, ops);
    REQUIRE(sys.rhs_jacobian);
    const ColumnVector y = test::random_vector(gen, 10);
    const DenseMatrix jac = sys.rhs_jacobian(y);
    const double h = 1e-6;
    DenseMatrix fd(10, 10);
    for (Index j = 0; j < 10; ++j) {
      ColumnVector yp = y, ym = y;
      yp[j] += h;
      ym[j] -= h;
      fd.col(j) = (rhs(sys, yp) - rhs(sys, ym)) / (2.0 * h);
    }
    CHECK(test::max_abs(jac - fd) < 1e-5 * std::max(1.0, test::max_abs(jac)));
  }
}

TEST_CASE("initial profiles") {
  // Even n with offset -L/2 puts a grid point exactly at x = 0.
  const GridConfig kdv_grid = GridConfig::make(20.0, 10);
  const ColumnVector kdv0 = initial_profile(Problem::kdv, kdv_grid);
  CHECK(kdv0[5] == doctest::Approx(4.5));  // x_5 = 0, 2 * 1.5^2 sech^2(0)

  const GridConfig mkdv_grid = GridConfig::make(10.0, 10);
  const ColumnVector mkdv0 = initial_profile(Problem::mkdv, mkdv_grid);
  CHECK(mkdv0[5] == doctest::Approx(2.0));  // sqrt(4) sech(0)

  // sech^2 is even: mirror points about x = 0 agree.
  for (Index k = 1; k < 5; ++k) {
    CHECK(kdv0[5 - k] == doctest::Approx(kdv0[5 + k]).epsilon(1e-15));
  }
}

TEST_CASE("grid defaults") {
  const GridConfig g = GridConfig::make(20.0, 500);
  CHECK(g.dx == 20.0 / 500.0);
  CHECK(g.offset == -10.0);
  const GridConfig shifted = GridConfig::make(20.0, 500, 0.0);
  CHECK(shifted.offset == 0.0);
}

}  // TEST_SUITE
