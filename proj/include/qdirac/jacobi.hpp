#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "qdirac/truncation.hpp"
#include "qdirac/weights.hpp"

namespace qdirac {

enum class OperatorKind { kA, kAbar, kT1, kT2, kT3, kDense };

const char* to_string(OperatorKind kind);

/// A matrix acting on the site index k within one Fourier mode.
///
/// The operator maps l2_{a^(domain_weight)} into l2_{a^(codomain_weight)};
/// both indices are needed to weigh norms of the operator.
struct ModeOperator {
  int n = 0;
  OperatorKind kind = OperatorKind::kDense;
  Index k_max = 0;
  int domain_weight = 0;
  int codomain_weight = 0;
  Eigen::SparseMatrix<double, Eigen::RowMajor> entries;

  Vector apply(const Vector& f) const;
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(entries); }
};

/// A^(n) f(k) = b^(n)(k) (f(k) - c-^(n)(k-1) f(k-1)) with f(-1) = 0.
/// Lower bidiagonal, l2_{a^(n+1)} -> l2_{a^(n)}.
ModeOperator build_A(const WeightFamily& family, int n, Index k_max);

/// Abar^(n) f(k) = b^(n+1)(k) (f(k) - c+^(n)(k) f(k+1)).
/// Upper bidiagonal, l2_{a^(n)} -> l2_{a^(n+1)}. Row k_max drops f(k_max+1).
ModeOperator build_Abar(const WeightFamily& family, int n, Index k_max);

/// alpha prod_{i<k} 1/c+^(n)(i), spanning the kernel of Abar^(n).
Vector kernel_Abar(const WeightFamily& family, int n, Index k_max, double alpha);

/// Solves A^(n) f = g exactly on all rows:
/// f(k) = sum_{i<=k} (1/b^(n)(i)) prod_{j=i}^{k-1} c-^(n)(j) g(i).
Vector solve_A(const WeightFamily& family, int n, const Vector& g);

/// Solves Abar^(n) f = -g given the boundary value f(inf):
/// f(k) = prod_{i>=k} c+^(n)(i) f(inf)
///        - sum_{i>=k} (1/b^(n+1)(i)) prod_{j=k}^{i-1} c+^(n)(j) g(i).
/// g is taken to vanish beyond its last stored index.
Vector solve_Abar(const WeightFamily& family, int n, const Vector& g, double boundary_value,
                  const TruncationSpec& trunc);

}  // namespace qdirac
