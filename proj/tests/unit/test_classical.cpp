#include <cmath>

#include <gtest/gtest.h>

#include "qdirac/classical.hpp"

namespace qdirac {
namespace {

Vector sample(const RadialGrid& grid, double (*fn)(double)) {
  Vector v(grid.size());
  for (Index j = 0; j < grid.size(); ++j) v[j] = fn(grid.nodes[j]);
  return v;
}

// J(n) = int_0^1 r^(2n+1) / (1 + r^2)^2 dr by the substitution t = r^2.
double j_integral(int n) {
  // (1/2) int_0^1 t^n / (1 + t)^2 dt, summed with a fine midpoint rule on a
  // smooth integrand.
  const int steps = 200000;
  double sum = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double t = (i + 0.5) / steps;
    sum += std::pow(t, n) / ((1 + t) * (1 + t));
  }
  return 0.5 * sum / steps;
}

TEST(Grid, NodesAndWeights) {
  const auto grid = make_radial_grid(64);
  EXPECT_EQ(grid.size(), 64);
  EXPECT_NEAR(grid.weights.sum(), 1.0, 1e-14);
  for (Index j = 0; j < grid.size(); ++j) {
    EXPECT_GT(grid.weights[j], 0.0);
    EXPECT_GT(grid.nodes[j], 0.0);
    EXPECT_LT(grid.nodes[j], 1.0);
    if (j > 0) EXPECT_GT(grid.nodes[j], grid.nodes[j - 1]);
  }
  double moment = 0.0;
  for (Index j = 0; j < grid.size(); ++j) moment += grid.weights[j] * std::pow(grid.nodes[j], 7);
  EXPECT_NEAR(moment, 1.0 / 8.0, 1e-14);
  EXPECT_THROW(make_radial_grid(50), Error);
}

TEST(Series, MinusModesStartAtOne) {
  const RadialSeries s(3, 32);
  EXPECT_EQ(s.plus.size(), 4u);
  EXPECT_EQ(s.minus.size(), 3u);
}

TEST(Dbar, HomogeneousSolutions) {
  const auto grid = make_radial_grid(256);
  const Vector zero = Vector::Zero(grid.size());
  EXPECT_EQ(dbar_residual(grid, zero, zero, 2, ProductSign::kPlus), 0.0);
  const Vector r3 = sample(grid, [](double r) { return r * r * r; });
  EXPECT_LE(dbar_residual(grid, r3, zero, 3, ProductSign::kPlus), 1e-12);
  const double fd = dbar_residual(grid, r3, zero, 3, ProductSign::kPlus, Derivative::kFiniteDifference);
  EXPECT_LE(fd, 1e-3);
  const double h = 1.0 / 256;
  EXPECT_LE(fd, 50 * h * h);
  EXPECT_GT(dbar_residual(grid, r3, zero, 3, ProductSign::kMinus), 0.5);
  EXPECT_THROW(dbar_residual(make_radial_grid(32), Vector::Zero(32), Vector::Zero(32), 1,
                             ProductSign::kPlus),
               Error);
}

TEST(ClassicalT, AnalyticIntegrals) {
  const auto grid = make_radial_grid(128);
  const Vector one = Vector::Ones(grid.size());
  const Vector rho = sample(grid, [](double r) { return r; });

  const auto ops1 = build_classical_T(1, grid);
  const Vector t1 = ops1.t1 * one;  // 2 r int_0^1 rho d rho = r
  const auto ops2 = build_classical_T(2, grid);
  const Vector t1b = ops2.t1 * rho;  // 2 r^2 int_0^1 rho^3 d rho = r^2 / 2
  const auto ops0 = build_classical_T(0, grid);
  const Vector t2 = ops0.t2 * rho;  // -2 int_r^1 rho d rho = r^2 - 1
  const Vector t3 = ops1.t3 * rho;  // 2 int_0^r rho^2 / r d rho = 2 r^2 / 3
  const Vector rho3 = sample(grid, [](double r) { return r * r * r; });
  const Vector t2b = ops2.t2 * rho3;  // -2 r^2 int_r^1 rho d rho = -r^2 (1 - r^2)
  for (Index j = 0; j < grid.size(); ++j) {
    const double r = grid.nodes[j];
    EXPECT_NEAR(t1[j], r, 1e-13);
    EXPECT_NEAR(t1b[j], r * r / 2, 1e-13);
    EXPECT_NEAR(t2[j], r * r - 1, 1e-13);
    EXPECT_NEAR(t3[j], 2 * r * r / 3, 1e-13);
    EXPECT_NEAR(t2b[j], -r * r * (1 - r * r), 1e-13);
  }
  EXPECT_TRUE((ops1.t2 * Vector::Zero(grid.size())).isZero());
  EXPECT_EQ(ops0.t1.size(), 0);
}

TEST(ClassicalT, CutoffsVanishAcrossPanels) {
  const auto grid = make_radial_grid(64);
  const auto ops = build_classical_T(3, grid);
  for (Index j = 0; j < grid.size(); ++j) {
    for (Index i = 0; i < grid.size(); ++i) {
      if (grid.panel_of(i) < grid.panel_of(j)) EXPECT_EQ(ops.t2(j, i), 0.0);
      if (grid.panel_of(i) > grid.panel_of(j)) EXPECT_EQ(ops.t3(j, i), 0.0);
    }
  }
}

TEST(SolveAndGlue, ZeroAndSingleMode) {
  const auto grid = make_radial_grid(128);
  const ClassicalElement zero(3, grid.size());
  const auto out0 = solve_and_glue(grid, zero);
  for (int n = 0; n <= 3; ++n) EXPECT_TRUE(out0.u.plus[n].isZero());

  ClassicalElement rhs(3, grid.size());
  rhs.u.plus[1] = sample(grid, [](double r) { return r; });
  const auto out = solve_and_glue(grid, rhs);
  for (Index j = 0; j < grid.size(); ++j) {
    const double r = grid.nodes[j];
    EXPECT_NEAR(out.u.plus[0][j], r * r - 1, 1e-13);
  }
  EXPECT_TRUE(out.v.plus[1].isZero());
}

TEST(SolveAndGlue, ResidualAndGluingOnRandomRhs) {
  const auto grid = make_radial_grid(512);
  const auto rhs = random_smooth_rhs(grid, 8, 2024);
  const auto report = classical_parametrix_check(grid, rhs);
  EXPECT_LE(report.dbar_residual, 1e-6);
  EXPECT_LE(report.boundary_residual, 1e-8);
}

TEST(SolveAndGlue, FiniteDifferenceConvergesAtSecondOrder) {
  double prev = 0.0;
  for (Index nodes : {64, 128, 256}) {
    const auto grid = make_radial_grid(nodes);
    const auto rhs = random_smooth_rhs(grid, 4, 7);
    const double res =
        classical_parametrix_check(grid, rhs, Derivative::kFiniteDifference).dbar_residual;
    if (prev > 0.0) EXPECT_GT(prev / res, 3.0) << nodes;
    prev = res;
  }
}

TEST(ClassicalHs, ClosedFormsAndBounds) {
  const auto grid = make_radial_grid(512);
  const auto rows = classical_hs_norms(0, 12, grid);
  for (const auto& row : rows) {
    EXPECT_TRUE(row.pass) << row.kind << row.n;
    double exact = 0.0;
    if (row.kind == "T3") {
      exact = 1.0 / (2.0 * row.n);
    } else if (row.kind == "T1") {
      exact = 2.0 / row.n * j_integral(row.n);
    } else if (row.n == 0) {
      exact = std::log(2.0);
    } else {
      exact = 2.0 / row.n * (0.25 - j_integral(row.n));
    }
    EXPECT_NEAR(row.hs_sq, exact, 1e-7 * exact) << row.kind << row.n;
  }
  const auto wide = classical_hs_norms(1, 32, grid);
  for (const auto& row : wide) {
    if (row.kind == "T1" && row.n == 3) EXPECT_NEAR(row.bound_sq, 1.0 / 12.0, 1e-15);
    if (row.kind == "T3" && row.n == 1) EXPECT_LE(row.hs_sq, 1.0);
  }
  EXPECT_THROW(classical_hs_norms(0, 65, grid), Error);
}

TEST(ClassicalKernel, OnlyConstantsSurvive) {
  const auto grid = make_radial_grid(256);
  const auto report = classical_kernel_check(grid, 6);
  EXPECT_EQ(report.dimension, 1);
  int accepted = 0;
  for (const auto& c : report.candidates) {
    if (c.accepted) {
      ++accepted;
      EXPECT_EQ(c.description, "u = v = 1");
      EXPECT_LE(c.dbar_residual, 1e-12);
    }
    if (c.n >= 1 && c.description.find("r^-") != std::string::npos) EXPECT_FALSE(c.regular);
  }
  EXPECT_EQ(accepted, 1);
}

}  // namespace
}  // namespace qdirac
