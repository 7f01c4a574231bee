#include "qdirac/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>
#include <gsl/gsl_integration.h>

#include "qdirac/errors.hpp"

namespace qdirac {

namespace {

constexpr Index kMinResidualGrid = 64;

struct GlRule {
  std::vector<double> x;  // on [a, b] after mapping
  std::vector<double> w;
};

GlRule gauss_legendre(int order, double a, double b) {
  gsl_integration_glfixed_table* table =
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(order));
  std::vector<std::pair<double, double>> pts(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(i), &pts[i].first,
                                  &pts[i].second, table);
  }
  gsl_integration_glfixed_table_free(table);
  std::sort(pts.begin(), pts.end());
  GlRule rule;
  for (const auto& [x, w] : pts) {
    rule.x.push_back(x);
    rule.w.push_back(w);
  }
  return rule;
}

Vector barycentric_weights(const double* x, int m) {
  Vector lambda(m);
  for (int i = 0; i < m; ++i) {
    double prod = 1.0;
    for (int l = 0; l < m; ++l) {
      if (l != i) prod *= x[i] - x[l];
    }
    lambda[i] = 1.0 / prod;
  }
  return lambda;
}

// Differentiation matrix of the interpolant through the panel's nodes.
Eigen::MatrixXd panel_derivative(const double* x, int m) {
  const Vector lambda = barycentric_weights(x, m);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      d(i, j) = lambda[j] / lambda[i] / (x[i] - x[j]);
      d(i, i) -= d(i, j);
    }
  }
  return d;
}

Vector derivative(const RadialGrid& grid, const Vector& f, Derivative method) {
  const Index size = grid.size();
  Vector df = Vector::Zero(size);
  if (method == Derivative::kSpectral) {
    const int m = grid.panel_order;
    for (int p = 0; p < grid.panels; ++p) {
      const Index off = static_cast<Index>(p) * m;
      df.segment(off, m) = panel_derivative(grid.nodes.data() + off, m) * f.segment(off, m);
    }
    return df;
  }
  for (Index i = 1; i + 1 < size; ++i) {
    const double h1 = grid.nodes[i] - grid.nodes[i - 1];
    const double h2 = grid.nodes[i + 1] - grid.nodes[i];
    df[i] = -h2 / (h1 * (h1 + h2)) * f[i - 1] + (h2 - h1) / (h1 * h2) * f[i] +
            h1 / (h2 * (h1 + h2)) * f[i + 1];
  }
  return df;
}

double radial_norm_sq(const RadialGrid& grid, const Vector& f) {
  double sum = 0.0;
  for (Index j = 0; j < grid.size(); ++j) sum += grid.weights[j] * grid.nodes[j] * f[j] * f[j];
  return sum;
}

double series_norm_sq(const RadialGrid& grid, const RadialSeries& s) {
  double sum = 0.0;
  for (const auto& v : s.plus) sum += radial_norm_sq(grid, v);
  for (const auto& v : s.minus) sum += radial_norm_sq(grid, v);
  return sum;
}

}  // namespace

RadialGrid make_radial_grid(Index nodes, int panel_order) {
  if (panel_order < 2 || nodes < panel_order || nodes % panel_order != 0) {
    throw Error(ErrorCode::kGridTooCoarse,
                fmt::format("{} nodes is not a positive multiple of the panel order {}", nodes,
                            panel_order));
  }
  RadialGrid grid;
  grid.panel_order = panel_order;
  grid.panels = static_cast<int>(nodes / panel_order);
  grid.nodes.resize(nodes);
  grid.weights.resize(nodes);
  for (int p = 0; p < grid.panels; ++p) {
    const GlRule rule = gauss_legendre(panel_order, grid.panel_start(p), grid.panel_end(p));
    for (int i = 0; i < panel_order; ++i) {
      grid.nodes[p * panel_order + i] = rule.x[i];
      grid.weights[p * panel_order + i] = rule.w[i];
    }
  }
  return grid;
}

Vector panel_interpolation_weights(const RadialGrid& grid, int panel, double s) {
  const int m = grid.panel_order;
  const double* x = grid.nodes.data() + static_cast<Index>(panel) * m;
  const Vector lambda = barycentric_weights(x, m);
  Vector out(m);
  for (int i = 0; i < m; ++i) {
    if (s == x[i]) {
      out.setZero();
      out[i] = 1.0;
      return out;
    }
    out[i] = lambda[i] / (s - x[i]);
  }
  return out / out.sum();
}

RadialSeries::RadialSeries(int n, Index grid_size) : n_max(n) {
  plus.assign(static_cast<std::size_t>(n + 1), Vector::Zero(grid_size));
  minus.assign(static_cast<std::size_t>(n), Vector::Zero(grid_size));
}

double dbar_residual(const RadialGrid& grid, const Vector& u, const Vector& p, int n,
                     ProductSign sign, Derivative method) {
  if (grid.size() < kMinResidualGrid) {
    throw Error(ErrorCode::kGridTooCoarse,
                fmt::format("{} nodes, residuals need at least {}", grid.size(),
                            kMinResidualGrid));
  }
  if (u.size() != grid.size() || p.size() != grid.size()) {
    throw Error(ErrorCode::kShapeMismatch, "samples do not match the grid");
  }
  const Vector du = derivative(grid, u, method);
  const double s = sign == ProductSign::kPlus ? -1.0 : 1.0;
  const Index first = method == Derivative::kSpectral ? 0 : 1;
  const Index last = method == Derivative::kSpectral ? grid.size() - 1 : grid.size() - 2;
  double sum = 0.0;
  for (Index j = first; j <= last; ++j) {
    const double r = grid.nodes[j];
    const double res = 0.5 * (du[j] + s * n / r * u[j]) - p[j];
    sum += grid.weights[j] * r * res * res;
  }
  return std::sqrt(sum);
}

ClassicalOperators build_classical_T(int n, const RadialGrid& grid) {
  if (n < 0) throw Error(ErrorCode::kIndexMismatch, "mode must be >= 0");
  const Index size = grid.size();
  const int m = grid.panel_order;
  const Vector& x = grid.nodes;
  const Vector& w = grid.weights;
  ClassicalOperators ops;
  ops.t2 = Eigen::MatrixXd::Zero(size, size);
  if (n >= 1) {
    ops.t1.resize(size, size);
    ops.t3 = Eigen::MatrixXd::Zero(size, size);
    for (Index j = 0; j < size; ++j) {
      for (Index i = 0; i < size; ++i) {
        ops.t1(j, i) = 2.0 * std::pow(x[j], n) * std::pow(x[i], n) * w[i];
      }
    }
  }
  const double dn = static_cast<double>(n);
  for (Index j = 0; j < size; ++j) {
    const double r = x[j];
    const int panel = grid.panel_of(j);
    const Index off = static_cast<Index>(panel) * m;
    // T2: panels strictly above r, then [r, panel end] on the interpolant.
    for (Index i = off + m; i < size; ++i) ops.t2(j, i) = -2.0 * std::pow(r / x[i], dn) * w[i];
    const GlRule upper = gauss_legendre(m, r, grid.panel_end(panel));
    for (int s = 0; s < m; ++s) {
      const Vector l = panel_interpolation_weights(grid, panel, upper.x[s]);
      const double k = -2.0 * std::pow(r / upper.x[s], dn) * upper.w[s];
      for (int i = 0; i < m; ++i) ops.t2(j, off + i) += k * l[i];
    }
    if (n == 0) continue;
    // T3: panels strictly below r, then [panel start, r].
    for (Index i = 0; i < off; ++i) ops.t3(j, i) = 2.0 * std::pow(x[i] / r, dn) * w[i];
    const GlRule lower = gauss_legendre(m, grid.panel_start(panel), r);
    for (int s = 0; s < m; ++s) {
      const Vector l = panel_interpolation_weights(grid, panel, lower.x[s]);
      const double k = 2.0 * std::pow(lower.x[s] / r, dn) * lower.w[s];
      for (int i = 0; i < m; ++i) ops.t3(j, off + i) += k * l[i];
    }
  }
  return ops;
}

double boundary_value(const RadialGrid& grid, const Vector& f) {
  const int last = grid.panels - 1;
  const Vector l = panel_interpolation_weights(grid, last, 1.0);
  return l.dot(f.segment(static_cast<Index>(last) * grid.panel_order, grid.panel_order));
}

ClassicalElement solve_and_glue(const RadialGrid& grid, const ClassicalElement& rhs) {
  const int n_max = rhs.u.n_max;
  const Index size = grid.size();
  if (rhs.v.n_max != n_max || rhs.u.plus.front().size() != size ||
      rhs.v.plus.front().size() != size) {
    throw Error(ErrorCode::kShapeMismatch, "rhs does not match the grid");
  }
  ClassicalElement out(n_max, size);
  for (int n = 0; n <= n_max; ++n) {
    const ClassicalOperators ops = build_classical_T(n, grid);
    auto solve = [&](const RadialSeries& p, const RadialSeries& q, RadialSeries& x) {
      if (n < n_max) x.plus[n] = ops.t2 * p.plus[n + 1];
      if (n == 0) return;
      const Vector& q_prev = n == 1 ? q.plus[0] : q.minus[n - 2];
      const Vector& p_prev = n == 1 ? p.plus[0] : p.minus[n - 2];
      x.plus[n] += ops.t1 * q_prev;
      x.minus[n - 1] = ops.t3 * p_prev;
    };
    solve(rhs.u, rhs.v, out.u);
    solve(rhs.v, rhs.u, out.v);
  }
  return out;
}

ClassicalElement random_smooth_rhs(const RadialGrid& grid, int n_max, std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  ClassicalElement rhs(n_max, grid.size());
  auto profile = [&](int m) {
    double alpha[4];
    for (double& a : alpha) a = coeff(rng);
    Vector f(grid.size());
    for (Index j = 0; j < grid.size(); ++j) {
      const double r = grid.nodes[j];
      const double r2 = r * r;
      f[j] = std::pow(r, m) * (alpha[0] + r2 * (alpha[1] + r2 * (alpha[2] + r2 * alpha[3])));
    }
    return f;
  };
  for (RadialSeries* s : {&rhs.u, &rhs.v}) {
    for (int m = 0; m < n_max; ++m) {
      s->plus[m] = profile(m);
      if (m >= 1) s->minus[m - 1] = profile(m);
    }
  }
  return rhs;
}

ClassicalParametrixReport classical_parametrix_check(const RadialGrid& grid,
                                                     const ClassicalElement& rhs,
                                                     Derivative method) {
  const ClassicalElement sol = solve_and_glue(grid, rhs);
  const int n_max = rhs.u.n_max;
  const Vector zero = Vector::Zero(grid.size());
  ClassicalParametrixReport report;
  report.grid_size = grid.size();
  report.method = method;
  double res_sq = 0.0;
  auto check = [&](const RadialSeries& x, const RadialSeries& p) {
    for (int n = 0; n <= n_max; ++n) {
      const Vector& target = n < n_max ? p.plus[n + 1] : zero;
      const double r = dbar_residual(grid, x.plus[n], target, n, ProductSign::kPlus, method);
      res_sq += r * r;
      if (n == 0) continue;
      const Vector& prev = n == 1 ? p.plus[0] : p.minus[n - 2];
      const double s = dbar_residual(grid, x.minus[n - 1], prev, n, ProductSign::kMinus, method);
      res_sq += s * s;
    }
  };
  check(sol.u, rhs.u);
  check(sol.v, rhs.v);
  const double scale = std::sqrt(series_norm_sq(grid, rhs.u) + series_norm_sq(grid, rhs.v));
  report.dbar_residual = scale > 0.0 ? std::sqrt(res_sq) / scale : std::sqrt(res_sq);

  double worst = std::abs(boundary_value(grid, sol.u.plus[0]) - boundary_value(grid, sol.v.plus[0]));
  for (int n = 1; n <= n_max; ++n) {
    worst = std::max(worst, std::abs(boundary_value(grid, sol.u.plus[n]) -
                                     boundary_value(grid, sol.v.minus[n - 1])));
    worst = std::max(worst, std::abs(boundary_value(grid, sol.u.minus[n - 1]) -
                                     boundary_value(grid, sol.v.plus[n])));
  }
  report.boundary_residual = worst;
  return report;
}

std::vector<ClassicalHsRow> classical_hs_norms(int n_from, int n_to, const RadialGrid& grid) {
  if (n_from < 0 || n_to > 64 || n_to < n_from) {
    throw Error(ErrorCode::kIndexMismatch,
                fmt::format("mode range {}..{} outside [0, 64]", n_from, n_to));
  }
  using boost::math::quadrature::gauss_kronrod;
  constexpr unsigned kDepth = 8;
  constexpr double kTol = 1e-12;
  const double inf = std::numeric_limits<double>::infinity();

  // Outer integral of the inner |kernel|^2 rho d rho against d mu(r).
  auto outer = [&](const auto& inner) {
    double sum = 0.0;
    for (Index j = 0; j < grid.size(); ++j) {
      const double r = grid.nodes[j];
      const double mu = r / ((1.0 + r * r) * (1.0 + r * r));
      sum += grid.weights[j] * mu * inner(r);
    }
    return sum;
  };

  std::vector<ClassicalHsRow> rows;
  for (int n = n_from; n <= n_to; ++n) {
    const double dn = static_cast<double>(n);
    if (n >= 1) {
      const double t1 = outer([&](double r) {
        return gauss_kronrod<double, 31>::integrate(
            [&](double rho) { return 4.0 * std::pow(r, 2 * dn) * std::pow(rho, 2 * dn - 1); },
            0.0, 1.0, kDepth, kTol);
      });
      rows.push_back({"T1", n, t1, 1.0 / (dn * (dn + 1.0)), false});
    }
    // rho = e^s turns 4 (r/rho)^2n / rho d rho into 4 e^{2n (ln r - s)} ds.
    const double t2 = outer([&](double r) {
      const double log_r = std::log(r);
      return gauss_kronrod<double, 31>::integrate(
          [&](double s) { return 4.0 * std::exp(2 * dn * (log_r - s)); }, log_r, 0.0, kDepth,
          kTol);
    });
    rows.push_back({"T2", n, t2, n >= 1 ? 1.0 / dn : inf, false});
    if (n >= 1) {
      const double t3 = outer([&](double r) {
        return gauss_kronrod<double, 31>::integrate(
            [&](double rho) { return 4.0 * std::pow(rho / r, 2 * dn) / rho; }, 0.0, r, kDepth,
            kTol);
      });
      rows.push_back({"T3", n, t3, 1.0 / dn, false});
    }
  }
  for (auto& row : rows) row.pass = std::isfinite(row.hs_sq) && row.hs_sq <= row.bound_sq;
  return rows;
}

ClassicalKernelReport classical_kernel_check(const RadialGrid& grid, int n_max) {
  const Index size = grid.size();
  const double r_min = grid.nodes[0];
  const double growth_limit = 1.0 / std::sqrt(r_min);
  const Vector zero = Vector::Zero(size);
  auto power = [&](double e) {
    Vector f(size);
    for (Index j = 0; j < size; ++j) f[j] = std::pow(grid.nodes[j], e);
    return f;
  };

  ClassicalKernelReport report;
  // A candidate is a set of nonzero (plus/minus, profile) entries per copy.
  struct Part {
    bool on_u;
    ProductSign sign;
    Vector f;
  };
  auto evaluate = [&](int n, std::string description, std::vector<Part> parts) {
    KernelCandidate c;
    c.n = n;
    c.description = std::move(description);
    c.regular = true;
    // Boundary values of u_n^+, u_n^-, v_n^+, v_n^- (minus absent at n = 0).
    double up = 0, um = 0, vp = 0, vm = 0;
    for (const auto& part : parts) {
      const double res = dbar_residual(grid, part.f, zero, n, part.sign);
      c.dbar_residual = std::max(c.dbar_residual, res);
      const double end = boundary_value(grid, part.f);
      const double ratio = std::abs(part.f[0]) / std::max(std::abs(end), 1e-300);
      c.growth_ratio = std::max(c.growth_ratio, ratio);
      if (ratio > growth_limit) c.regular = false;
      double& slot = part.on_u ? (part.sign == ProductSign::kPlus ? up : um)
                               : (part.sign == ProductSign::kPlus ? vp : vm);
      slot = end;
    }
    c.boundary_residual =
        n == 0 ? std::abs(up - vp) : std::max(std::abs(up - vm), std::abs(um - vp));
    c.accepted = c.regular && c.boundary_residual <= 1e-8;
    if (c.accepted) ++report.dimension;
    report.candidates.push_back(std::move(c));
  };

  const auto plus = ProductSign::kPlus;
  const auto minus = ProductSign::kMinus;
  evaluate(0, "u = v = 1", {{true, plus, power(0)}, {false, plus, power(0)}});
  evaluate(0, "u = 1, v = 0", {{true, plus, power(0)}});
  for (int n = 1; n <= n_max; ++n) {
    const double dn = static_cast<double>(n);
    evaluate(n, fmt::format("u_{0}^+ = r^{0}, v = 0", n), {{true, plus, power(dn)}});
    evaluate(n, fmt::format("v_{0}^+ = r^{0}, u = 0", n), {{false, plus, power(dn)}});
    evaluate(n, fmt::format("u_{0}^+ = r^{0}, v_{0}^- = r^-{0}", n),
             {{true, plus, power(dn)}, {false, minus, power(-dn)}});
    evaluate(n, fmt::format("u_{0}^- = r^-{0}, v_{0}^+ = r^{0}", n),
             {{true, minus, power(-dn)}, {false, plus, power(dn)}});
  }
  return report;
}

}  // namespace qdirac
