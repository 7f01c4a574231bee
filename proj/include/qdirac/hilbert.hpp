#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qdirac/truncation.hpp"
#include "qdirac/weights.hpp"

namespace qdirac {

/// Truncated formal series sum_n U^n f_n^+(K) + sum_{n>=1} f_n^-(K) (U*)^n.
///
/// Plus modes run over n = 0..n_max, minus modes over n = 1..n_max, and every
/// coefficient vector covers k = 0..k_max.
template <class Scalar>
class BasicFourierElement {
 public:
  using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicFourierElement() = default;
  BasicFourierElement(int n_max, Index k_max);

  int n_max() const { return n_max_; }
  Index k_max() const { return k_max_; }

  VectorType& plus(int n);
  const VectorType& plus(int n) const;
  VectorType& minus(int n);
  const VectorType& minus(int n) const;

  bool same_shape(const BasicFourierElement& other) const {
    return n_max_ == other.n_max_ && k_max_ == other.k_max_;
  }

  /// Euclidean norm of all stored coefficients (no weights).
  double coefficient_norm() const;

  BasicFourierElement& operator+=(const BasicFourierElement& other);
  BasicFourierElement& operator-=(const BasicFourierElement& other);
  BasicFourierElement& operator*=(Scalar factor);

  friend BasicFourierElement operator+(BasicFourierElement lhs, const BasicFourierElement& rhs) {
    return lhs += rhs;
  }
  friend BasicFourierElement operator-(BasicFourierElement lhs, const BasicFourierElement& rhs) {
    return lhs -= rhs;
  }
  friend BasicFourierElement operator*(Scalar factor, BasicFourierElement x) {
    return x *= factor;
  }

 private:
  void require_shape(const BasicFourierElement& other) const;

  int n_max_ = 0;
  Index k_max_ = 0;
  std::vector<VectorType> plus_;
  std::vector<VectorType> minus_;  // minus_[n - 1]
};

/// A vector of H = H1 (+) H1: one series per disk copy.
template <class Scalar>
struct BasicGluedElement {
  BasicFourierElement<Scalar> f;
  BasicFourierElement<Scalar> g;

  BasicGluedElement() = default;
  BasicGluedElement(int n_max, Index k_max) : f(n_max, k_max), g(n_max, k_max) {}
  BasicGluedElement(BasicFourierElement<Scalar> first, BasicFourierElement<Scalar> second);

  double coefficient_norm() const;

  BasicGluedElement& operator+=(const BasicGluedElement& other) {
    f += other.f;
    g += other.g;
    return *this;
  }
  BasicGluedElement& operator-=(const BasicGluedElement& other) {
    f -= other.f;
    g -= other.g;
    return *this;
  }
  BasicGluedElement& operator*=(Scalar factor) {
    f *= factor;
    g *= factor;
    return *this;
  }
  friend BasicGluedElement operator+(BasicGluedElement lhs, const BasicGluedElement& rhs) {
    return lhs += rhs;
  }
  friend BasicGluedElement operator-(BasicGluedElement lhs, const BasicGluedElement& rhs) {
    return lhs -= rhs;
  }
  friend BasicGluedElement operator*(Scalar factor, BasicGluedElement x) { return x *= factor; }
};

using FourierElement = BasicFourierElement<double>;
using ComplexFourierElement = BasicFourierElement<std::complex<double>>;
using GluedElement = BasicGluedElement<double>;
using ComplexGluedElement = BasicGluedElement<std::complex<double>>;

/// Weighted l2 norm sqrt(sum |f_n^+-(k)|^2 / a(n,k)).
template <class Scalar>
double norm(const BasicFourierElement<Scalar>& x, const WeightFamily& family);

template <class Scalar>
double norm(const BasicGluedElement<Scalar>& x, const WeightFamily& family);

/// Estimates f(inf) per mode as f(k_max), flagged converged when
/// |f(k_max) - f(k_max - delta)| < tol_trace.
template <class Scalar>
struct BasicBoundaryTrace {
  std::vector<Scalar> plus_limits;   // n = 0..n_max
  std::vector<Scalar> minus_limits;  // n = 1..n_max stored at n - 1
  std::vector<bool> plus_converged;
  std::vector<bool> minus_converged;

  bool all_converged() const;
};

using BoundaryTrace = BasicBoundaryTrace<double>;

template <class Scalar>
BasicBoundaryTrace<Scalar> boundary_trace(const BasicFourierElement<Scalar>& x,
                                          const TruncationSpec& trunc);

struct GluingReport {
  bool glued = true;
  double max_residual = 0.0;
  int offending_mode = -1;
  std::string offending_condition;
};

/// Mirror gluing f_n^+(inf) = g_n^-(inf), f_n^-(inf) = g_n^+(inf) for
/// n >= 1 and f_0^+(inf) = g_0^+(inf), to absolute tolerance tol_trace.
/// Throws Error(kTraceNotConverged) if any limit fails its Cauchy check.
template <class Scalar>
GluingReport check_gluing(const BasicGluedElement<Scalar>& x, const TruncationSpec& trunc);

/// Fourier coefficients of a finite matrix on l2({0..k_max}):
/// x_n^+(k) = x(k+n, k), x_n^-(k) = x(k, k+n). Modes run to n = k_max.
FourierElement series_of(const Eigen::MatrixXd& x);

struct SeriesContinuityReport {
  double series_norm_sq = 0.0;  // ||x_series||^2 in H1
  double series_norm = 0.0;
  double operator_norm = 0.0;
  double sup_s = 0.0;           // sup_n s(n) over the sampled modes
  double rhs = 0.0;             // sup_s * ||x_series|| * ||x||
  bool holds = true;
};

/// Evaluates ||x_series||^2 <= sup_n s(n) ||x_series|| ||x||.
SeriesContinuityReport series_continuity_check(const Eigen::MatrixXd& x,
                                               const WeightFamily& family,
                                               const TruncationSpec& trunc);

}  // namespace qdirac
