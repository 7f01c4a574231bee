#include "qdirac/hilbert.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>
#include <fmt/format.h>

namespace qdirac {

template <class Scalar>
BasicFourierElement<Scalar>::BasicFourierElement(int n_max, Index k_max)
    : n_max_(n_max), k_max_(k_max) {
  if (n_max < 0 || k_max < 0) {
    throw Error(ErrorCode::kShapeMismatch,
                fmt::format("invalid element shape n_max={} k_max={}", n_max, k_max));
  }
  plus_.assign(static_cast<std::size_t>(n_max + 1), VectorType::Zero(k_max + 1));
  minus_.assign(static_cast<std::size_t>(n_max), VectorType::Zero(k_max + 1));
}

template <class Scalar>
auto BasicFourierElement<Scalar>::plus(int n) -> VectorType& {
  return const_cast<VectorType&>(std::as_const(*this).plus(n));
}

template <class Scalar>
auto BasicFourierElement<Scalar>::plus(int n) const -> const VectorType& {
  if (n < 0 || n > n_max_) {
    throw Error(ErrorCode::kShapeMismatch, fmt::format("plus mode {} outside [0, {}]", n, n_max_));
  }
  return plus_[static_cast<std::size_t>(n)];
}

template <class Scalar>
auto BasicFourierElement<Scalar>::minus(int n) -> VectorType& {
  return const_cast<VectorType&>(std::as_const(*this).minus(n));
}

template <class Scalar>
auto BasicFourierElement<Scalar>::minus(int n) const -> const VectorType& {
  if (n < 1 || n > n_max_) {
    throw Error(ErrorCode::kShapeMismatch,
                fmt::format("minus mode {} outside [1, {}]", n, n_max_));
  }
  return minus_[static_cast<std::size_t>(n - 1)];
}

template <class Scalar>
double BasicFourierElement<Scalar>::coefficient_norm() const {
  double sum = 0.0;
  for (const auto& v : plus_) sum += v.squaredNorm();
  for (const auto& v : minus_) sum += v.squaredNorm();
  return std::sqrt(sum);
}

template <class Scalar>
void BasicFourierElement<Scalar>::require_shape(const BasicFourierElement& other) const {
  if (!same_shape(other)) {
    throw Error(ErrorCode::kShapeMismatch,
                fmt::format("shape ({}, {}) vs ({}, {})", n_max_, k_max_, other.n_max_,
                            other.k_max_));
  }
}

template <class Scalar>
BasicFourierElement<Scalar>& BasicFourierElement<Scalar>::operator+=(
    const BasicFourierElement& other) {
  require_shape(other);
  for (std::size_t i = 0; i < plus_.size(); ++i) plus_[i] += other.plus_[i];
  for (std::size_t i = 0; i < minus_.size(); ++i) minus_[i] += other.minus_[i];
  return *this;
}

template <class Scalar>
BasicFourierElement<Scalar>& BasicFourierElement<Scalar>::operator-=(
    const BasicFourierElement& other) {
  require_shape(other);
  for (std::size_t i = 0; i < plus_.size(); ++i) plus_[i] -= other.plus_[i];
  for (std::size_t i = 0; i < minus_.size(); ++i) minus_[i] -= other.minus_[i];
  return *this;
}

template <class Scalar>
BasicFourierElement<Scalar>& BasicFourierElement<Scalar>::operator*=(Scalar factor) {
  for (auto& v : plus_) v *= factor;
  for (auto& v : minus_) v *= factor;
  return *this;
}

template <class Scalar>
BasicGluedElement<Scalar>::BasicGluedElement(BasicFourierElement<Scalar> first,
                                             BasicFourierElement<Scalar> second)
    : f(std::move(first)), g(std::move(second)) {
  if (!f.same_shape(g)) {
    throw Error(ErrorCode::kShapeMismatch, "glued components must share (n_max, k_max)");
  }
}

template <class Scalar>
double BasicGluedElement<Scalar>::coefficient_norm() const {
  return std::hypot(f.coefficient_norm(), g.coefficient_norm());
}

template <class Scalar>
double norm(const BasicFourierElement<Scalar>& x, const WeightFamily& family) {
  double sum = 0.0;
  auto accumulate = [&](const auto& v, int n) {
    for (Index k = 0; k <= x.k_max(); ++k) {
      const double a = family.a(n, k);
      if (!(a > 0.0) || std::isnan(a)) {
        throw Error(ErrorCode::kIndexMismatch,
                    fmt::format("weight a({}, {}) = {} not usable", n, k, a));
      }
      sum += std::norm(v[k] / std::sqrt(a));
    }
  };
  for (int n = 0; n <= x.n_max(); ++n) accumulate(x.plus(n), n);
  for (int n = 1; n <= x.n_max(); ++n) accumulate(x.minus(n), n);
  return std::sqrt(sum);
}

template <class Scalar>
double norm(const BasicGluedElement<Scalar>& x, const WeightFamily& family) {
  return std::hypot(norm(x.f, family), norm(x.g, family));
}

template <class Scalar>
bool BasicBoundaryTrace<Scalar>::all_converged() const {
  return std::all_of(plus_converged.begin(), plus_converged.end(), [](bool b) { return b; }) &&
         std::all_of(minus_converged.begin(), minus_converged.end(), [](bool b) { return b; });
}

template <class Scalar>
BasicBoundaryTrace<Scalar> boundary_trace(const BasicFourierElement<Scalar>& x,
                                          const TruncationSpec& trunc) {
  const Index k_max = x.k_max();
  const Index delta = std::max<Index>(1, k_max / 4);
  if (k_max < 2 * delta) {
    throw Error(ErrorCode::kShapeMismatch, "k_max too small for the trace Cauchy check");
  }
  BasicBoundaryTrace<Scalar> trace;
  auto estimate = [&](const auto& v, std::vector<Scalar>& limits, std::vector<bool>& ok) {
    limits.push_back(v[k_max]);
    ok.push_back(std::abs(v[k_max] - v[k_max - delta]) < trunc.tol_trace);
  };
  for (int n = 0; n <= x.n_max(); ++n) estimate(x.plus(n), trace.plus_limits, trace.plus_converged);
  for (int n = 1; n <= x.n_max(); ++n) {
    estimate(x.minus(n), trace.minus_limits, trace.minus_converged);
  }
  return trace;
}

template <class Scalar>
GluingReport check_gluing(const BasicGluedElement<Scalar>& x, const TruncationSpec& trunc) {
  const auto tf = boundary_trace(x.f, trunc);
  const auto tg = boundary_trace(x.g, trunc);
  if (!tf.all_converged() || !tg.all_converged()) {
    throw Error(ErrorCode::kTraceNotConverged, "boundary limit failed its Cauchy check");
  }
  GluingReport report;
  auto consider = [&](Scalar lhs, Scalar rhs, int n, const char* what) {
    const double r = std::abs(lhs - rhs);
    if (r > report.max_residual) {
      report.max_residual = r;
      report.offending_mode = n;
      report.offending_condition = what;
    }
  };
  consider(tf.plus_limits[0], tg.plus_limits[0], 0, "f0+ = g0+");
  for (int n = 1; n <= x.f.n_max(); ++n) {
    const auto i = static_cast<std::size_t>(n);
    consider(tf.plus_limits[i], tg.minus_limits[i - 1], n, "fn+ = gn-");
    consider(tf.minus_limits[i - 1], tg.plus_limits[i], n, "fn- = gn+");
  }
  report.glued = report.max_residual <= trunc.tol_trace;
  return report;
}

FourierElement series_of(const Eigen::MatrixXd& x) {
  if (x.rows() != x.cols() || x.rows() < 1) {
    throw Error(ErrorCode::kShapeMismatch, "series_of expects a nonempty square matrix");
  }
  const Index k_max = x.rows() - 1;
  const int n_max = static_cast<int>(k_max);
  FourierElement series(n_max, k_max);
  for (int n = 0; n <= n_max; ++n) {
    for (Index k = 0; k + n <= k_max; ++k) {
      series.plus(n)[k] = x(k + n, k);
      if (n >= 1) series.minus(n)[k] = x(k, k + n);
    }
  }
  return series;
}

SeriesContinuityReport series_continuity_check(const Eigen::MatrixXd& x,
                                               const WeightFamily& family,
                                               const TruncationSpec& trunc) {
  const FourierElement series = series_of(x);
  SeriesContinuityReport report;
  report.series_norm = norm(series, family);
  report.series_norm_sq = report.series_norm * report.series_norm;
  report.operator_norm = Eigen::BDCSVD<Eigen::MatrixXd>(x).singularValues()(0);
  for (int n = 0; n <= series.n_max(); ++n) {
    const auto s = sum_series([&](Index k) { return 1.0 / family.a(n, k); }, x.rows(),
                              trunc.k_tail, trunc.tol_tail);
    report.sup_s = std::max(report.sup_s, s.value());
  }
  report.rhs = report.sup_s * report.series_norm * report.operator_norm;
  report.holds = report.series_norm_sq <= report.rhs * (1.0 + 1e-12);
  return report;
}

template class BasicFourierElement<double>;
template class BasicFourierElement<std::complex<double>>;
template struct BasicGluedElement<double>;
template struct BasicGluedElement<std::complex<double>>;
template struct BasicBoundaryTrace<double>;
template struct BasicBoundaryTrace<std::complex<double>>;
template double norm(const FourierElement&, const WeightFamily&);
template double norm(const ComplexFourierElement&, const WeightFamily&);
template double norm(const GluedElement&, const WeightFamily&);
template double norm(const ComplexGluedElement&, const WeightFamily&);
template BoundaryTrace boundary_trace(const FourierElement&, const TruncationSpec&);
template BasicBoundaryTrace<std::complex<double>> boundary_trace(const ComplexFourierElement&,
                                                                 const TruncationSpec&);
template GluingReport check_gluing(const GluedElement&, const TruncationSpec&);
template GluingReport check_gluing(const ComplexGluedElement&, const TruncationSpec&);

}  // namespace qdirac
