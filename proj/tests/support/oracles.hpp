#pragma once

// Independent reference computations for the tests. Everything here is
// assembled from the raw coefficient functions and dense linear algebra, so
// it shares no code path with the library routines it checks.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "qdirac/weights.hpp"

namespace qdirac::oracle {

/// prod_{i=k}^{horizon} c(n, i) by plain multiplication.
inline double product(const CoefficientFn& c, int n, Index k, Index horizon) {
  double p = 1.0;
  for (Index i = k; i <= horizon; ++i) p *= c(n, i);
  return p;
}

inline Index numerical_nullity(const Eigen::MatrixXd& m, double rel_threshold,
                               Eigen::VectorXd* null_vector = nullptr) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = rel_threshold * sv[0];
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) rank += sv[i] > cut ? 1 : 0;
  if (null_vector != nullptr && m.cols() > rank) *null_vector = svd.matrixV().col(m.cols() - 1);
  return m.cols() - rank;
}

struct DenseKernel {
  std::vector<Index> nullity;  // per mode 0..n_max-1
  Eigen::VectorXd mode0;       // (f_0^+, g_0^+) null vector scaled to f_0^+(k_max) = 1
};

/// Homogeneous glued system of each mode with the Abar rows divided by b and
/// restricted to k < k_max, full A rows, and the gluing rows at k_max.
inline DenseKernel dense_kernel(const WeightFamily& family, int n_max, Index k_max,
                                double rel_threshold = 1e-10) {
  const Index len = k_max + 1;
  DenseKernel out;
  auto abar_rows = [&](Eigen::MatrixXd& m, Index row0, Index col0, int n) {
    for (Index k = 0; k < k_max; ++k) {
      m(row0 + k, col0 + k) = 1.0;
      m(row0 + k, col0 + k + 1) = -family.c_plus(n, k);
    }
  };
  auto a_rows = [&](Eigen::MatrixXd& m, Index row0, Index col0, int n) {
    for (Index k = 0; k <= k_max; ++k) {
      m(row0 + k, col0 + k) = 1.0;
      if (k > 0) m(row0 + k, col0 + k - 1) = -family.c_minus(n, k - 1);
    }
  };

  Eigen::MatrixXd m0 = Eigen::MatrixXd::Zero(2 * k_max + 1, 2 * len);
  abar_rows(m0, 0, 0, 0);
  abar_rows(m0, k_max, len, 0);
  m0(2 * k_max, k_max) = 1.0;
  m0(2 * k_max, len + k_max) = -1.0;
  Eigen::VectorXd v;
  out.nullity.push_back(numerical_nullity(m0, rel_threshold, &v));
  out.mode0 = v / v[k_max];

  for (int n = 1; n < n_max; ++n) {
    // Unknowns: f_n^+, g_n^+, f_n^-, g_n^-.
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4 * len, 4 * len);
    abar_rows(m, 0, 0, n);
    abar_rows(m, k_max, len, n);
    a_rows(m, 2 * k_max, 2 * len, n - 1);
    a_rows(m, 2 * k_max + len, 3 * len, n - 1);
    const Index glue = 2 * k_max + 2 * len;
    m(glue, k_max) = 1.0;
    m(glue, 3 * len + k_max) = -1.0;
    m(glue + 1, 2 * len + k_max) = 1.0;
    m(glue + 1, len + k_max) = -1.0;
    out.nullity.push_back(numerical_nullity(m, rel_threshold));
  }
  return out;
}

/// Upper bidiagonal Abar^(n) and lower bidiagonal A^(n) straight from the
/// defining difference formulas.
inline Eigen::MatrixXd dense_abar(const WeightFamily& family, int n, Index k_max) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k_max + 1, k_max + 1);
  for (Index k = 0; k <= k_max; ++k) {
    m(k, k) = family.b(n + 1, k);
    if (k < k_max) m(k, k + 1) = -family.b(n + 1, k) * family.c_plus(n, k);
  }
  return m;
}

inline Eigen::MatrixXd dense_a(const WeightFamily& family, int n, Index k_max) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k_max + 1, k_max + 1);
  for (Index k = 0; k <= k_max; ++k) {
    m(k, k) = family.b(n, k);
    if (k > 0) m(k, k - 1) = -family.b(n, k) * family.c_minus(n, k - 1);
  }
  return m;
}

/// s(n) = q^(n/2) for the q-weight family.
inline double q_weight_s(double q, int n) { return std::pow(q, n / 2.0); }

/// prod_{k>=0} 1/c+^(n)(k) and prod_{k>=0} 1/c-^(n)(k) for the q-weight
/// family, obtained by telescoping w(k)/w(k+n) and w(k)w(k+n)/w(k+n+1)^2.
inline double q_inverse_product_plus(double q, int n) {
  double p = 1.0;
  for (int j = 1; j <= n; ++j) p *= 1.0 - std::pow(q, j);
  return 1.0 / std::sqrt(p);
}

inline double q_inverse_product_minus(double q, int n) {
  double p = 1.0 - std::pow(q, n + 1);
  for (int j = 1; j <= n + 1; ++j) p *= 1.0 - std::pow(q, j);
  return 1.0 / std::sqrt(p);
}

}  // namespace qdirac::oracle
