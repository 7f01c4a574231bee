#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qdirac/truncation.hpp"
#include "qdirac/weights.hpp"

namespace qdirac {

/// Composite Gauss-Legendre rule on [0, 1] with equal panels.
struct RadialGrid {
  Vector nodes;
  Vector weights;
  int panel_order = 16;
  int panels = 0;

  Index size() const { return nodes.size(); }
  double panel_start(int p) const { return static_cast<double>(p) / panels; }
  double panel_end(int p) const { return static_cast<double>(p + 1) / panels; }
  int panel_of(Index j) const { return static_cast<int>(j / panel_order); }
};

/// `nodes` must be a positive multiple of `panel_order`.
RadialGrid make_radial_grid(Index nodes, int panel_order = 16);

/// Lagrange weights L_m(s) of the panel's nodes at the point s.
Vector panel_interpolation_weights(const RadialGrid& grid, int panel, double s);

/// Radial Fourier coefficients of one function on the disk: plus modes
/// n = 0..n_max, minus modes n = 1..n_max.
struct RadialSeries {
  int n_max = 0;
  std::vector<Vector> plus;
  std::vector<Vector> minus;  // minus[n - 1]

  RadialSeries() = default;
  RadialSeries(int n_max, Index grid_size);
};

/// The pair (u, v) on the two glued disks.
struct ClassicalElement {
  RadialSeries u;
  RadialSeries v;

  ClassicalElement() = default;
  ClassicalElement(int n_max, Index grid_size) : u(n_max, grid_size), v(n_max, grid_size) {}
};

enum class Derivative { kSpectral, kFiniteDifference };

/// L2([0,1], r dr) norm over grid nodes of the mode equation residual
/// (u' - (n/r) u)/2 - p for plus modes and (u' + (n/r) u)/2 - p for minus.
/// Spectral differentiation is exact per panel for degree < panel_order;
/// finite differences are centered three-point and skip both endpoints.
/// Throws Error(kGridTooCoarse) below 64 nodes.
double dbar_residual(const RadialGrid& grid, const Vector& u, const Vector& p, int n,
                     ProductSign sign, Derivative method = Derivative::kSpectral);

struct ClassicalOperators {
  Eigen::MatrixXd t1;  // 2 r^n int_0^1 rho^n f(rho) d rho (empty for n = 0)
  Eigen::MatrixXd t2;  // -2 int_r^1 (r/rho)^n f(rho) d rho
  Eigen::MatrixXd t3;  // 2 int_0^r (rho/r)^n f(rho) d rho (empty for n = 0)
};

/// Quadrature matrices acting on grid samples. The panel containing r is
/// split at r and integrated with a panel_order-point rule over the
/// interpolant, so the cutoffs are exact for panel polynomials.
ClassicalOperators build_classical_T(int n, const RadialGrid& grid);

/// Value at r = 1 by interpolation on the last panel.
double boundary_value(const RadialGrid& grid, const Vector& f);

/// Q(p, q) = (u, v): u_n^+ = T2 p_{n+1}^+ + T1 q_{n-1}^-, u_n^- = T3 p_{n-1}^-,
/// u_0^+ = T2 p_1^+, where index n - 1 = 0 refers to the plus mode 0, and v
/// mirrored. Plus mode n_max takes no T2 term.
ClassicalElement solve_and_glue(const RadialGrid& grid, const ClassicalElement& rhs);

/// Per mode r^m g(r^2) profiles with g a cubic in r^2 with uniform [-1, 1]
/// coefficients, for modes up to n_max - 1. Deterministic in seed.
ClassicalElement random_smooth_rhs(const RadialGrid& grid, int n_max, std::uint64_t seed);

struct ClassicalParametrixReport {
  Index grid_size = 0;
  double dbar_residual = 0.0;      // combined over modes and copies, relative to ||rhs||
  double boundary_residual = 0.0;  // max gluing mismatch at r = 1
  Derivative method = Derivative::kSpectral;
};

ClassicalParametrixReport classical_parametrix_check(const RadialGrid& grid,
                                                     const ClassicalElement& rhs,
                                                     Derivative method = Derivative::kSpectral);

struct ClassicalHsRow {
  std::string kind;  // "T1", "T2", "T3"
  int n = 0;
  double hs_sq = 0.0;
  double bound_sq = 0.0;  // infinity for T2 at n = 0 (finiteness only)
  bool pass = false;
};

/// HS norms squared of the three operators from L2(r dr) to L2(d mu) with
/// d mu = r/(1+r^2)^2 dr: the inner integral of |kernel|^2 rho d rho by
/// adaptive Gauss-Kronrod, the outer integral on the grid. Bounds are
/// 1/(n(n+1)), 1/n, 1/n. Throws Error(kIndexMismatch) outside [0, 64].
std::vector<ClassicalHsRow> classical_hs_norms(int n_from, int n_to, const RadialGrid& grid);

struct KernelCandidate {
  int n = 0;
  std::string description;
  double dbar_residual = 0.0;
  double growth_ratio = 0.0;  // |f(r_min)| / |f(1)|, worst over the candidate's profiles
  bool regular = false;
  double boundary_residual = 0.0;
  bool accepted = false;
};

struct ClassicalKernelReport {
  std::vector<KernelCandidate> candidates;
  int dimension = 0;
};

/// Enumerates the homogeneous solutions c r^n (plus) and c r^-n (minus) of
/// each mode on either copy and filters them by regularity at r = 0 (growth
/// above r_min^-1/2 is rejected) and by the gluing at r = 1.
ClassicalKernelReport classical_kernel_check(const RadialGrid& grid, int n_max);

}  // namespace qdirac
