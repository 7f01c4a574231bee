#pragma once

// Scalar-generic replay of the quantum D and Q used by verify_identities.
//
// D multiplies by b(k), which grows without bound in k, while the outputs of
// T1 and T3 tend to nonzero limits. Evaluating D on a double-precision Q(p)
// therefore loses every row where b(k) * eps exceeds the entry scale. The
// engine reruns both operators in a wider Real type built from the same
// double coefficients, so DQ = I holds to the precision chosen.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qdirac/hilbert.hpp"
#include "qdirac/truncation.hpp"
#include "qdirac/weights.hpp"

namespace qdirac::detail {

template <class Real>
struct ExtendedElement {
  std::vector<std::vector<Real>> plus;   // n = 0..n_max
  std::vector<std::vector<Real>> minus;  // n = 1..n_max stored at n - 1

  ExtendedElement(int n_max, Index k_max)
      : plus(n_max + 1, std::vector<Real>(k_max + 1, Real(0))),
        minus(n_max, std::vector<Real>(k_max + 1, Real(0))) {}

  explicit ExtendedElement(const FourierElement& x)
      : ExtendedElement(x.n_max(), x.k_max()) {
    for (int n = 0; n <= x.n_max(); ++n) {
      for (Index k = 0; k <= x.k_max(); ++k) {
        plus[n][k] = Real(x.plus(n)[k]);
        if (n >= 1) minus[n - 1][k] = Real(x.minus(n)[k]);
      }
    }
  }
};

template <class Real>
class ExtendedOperators {
 public:
  using Seq = std::vector<Real>;
  using Element = ExtendedElement<Real>;

  ExtendedOperators(const WeightFamily& family, const TruncationSpec& trunc)
      : n_max_(trunc.n_max), k_max_(trunc.k_max) {
    const Index len = k_max_ + 1;
    auto table = [&](const CoefficientFn& fn, int n) {
      Seq out(len);
      for (Index k = 0; k <= k_max_; ++k) out[k] = Real(fn(n, k));
      return out;
    };
    // Profiles obey P(k) = c(k) P(k+1) exactly in Real; only the value at
    // k_max comes from the double tail product.
    auto profile = [&](ProductSign sign, const Seq& c, int n) {
      Seq p(len);
      p[k_max_] = Real(tail_product(family, sign, n, k_max_, trunc));
      for (Index k = k_max_ - 1; k >= 0; --k) p[k] = c[k] * p[k + 1];
      return p;
    };
    for (int n = 0; n <= n_max_; ++n) {
      bbar_.push_back(table(family.b, n + 1));
      cplus_.push_back(table(family.c_plus, n));
      plus_profile_.push_back(profile(ProductSign::kPlus, cplus_.back(), n));
    }
    for (int n = 0; n < n_max_; ++n) {
      ba_.push_back(table(family.b, n));
      cminus_.push_back(table(family.c_minus, n));
      Seq row = profile(ProductSign::kMinus, cminus_.back(), n);
      for (Index i = 0; i <= k_max_; ++i) row[i] /= ba_.back()[i];
      t1_row_.push_back(std::move(row));  // row of T1^(n+1)
    }
  }

  int n_max() const { return n_max_; }
  Index k_max() const { return k_max_; }
  const Seq& plus_profile(int n) const { return plus_profile_[n]; }

  /// Abar^(n) f, row k_max without the f(k_max + 1) term.
  Seq apply_abar(int n, const Seq& f) const {
    Seq out(f.size());
    for (Index k = 0; k <= k_max_; ++k) {
      Real v = f[k];
      if (k < k_max_) v -= cplus_[n][k] * f[k + 1];
      out[k] = bbar_[n][k] * v;
    }
    return out;
  }

  Seq apply_a(int n, const Seq& f) const {
    Seq out(f.size());
    for (Index k = 0; k <= k_max_; ++k) {
      Real v = f[k];
      if (k > 0) v -= cminus_[n][k - 1] * f[k - 1];
      out[k] = ba_[n][k] * v;
    }
    return out;
  }

  /// T2^(n) g: solves Abar^(n) f = -g with f(inf) = 0.
  Seq t2(int n, const Seq& g) const {
    Seq f(g.size());
    Real h(0);
    for (Index k = k_max_; k >= 0; --k) {
      h = g[k] / bbar_[n][k] + (k < k_max_ ? cplus_[n][k] * h : Real(0));
      f[k] = -h;
    }
    return f;
  }

  /// T3^(n) g: solves A^(n-1) f = g.
  Seq t3(int n, const Seq& g) const {
    Seq f(g.size());
    for (Index k = 0; k <= k_max_; ++k) {
      const Real carried = k > 0 ? cminus_[n - 1][k - 1] * f[k - 1] : Real(0);
      f[k] = carried + g[k] / ba_[n - 1][k];
    }
    return f;
  }

  /// T1^(n) g = P+^(n) <t1 row, g>.
  Seq t1(int n, const Seq& g) const {
    Real s(0);
    for (Index i = 0; i <= k_max_; ++i) s += t1_row_[n - 1][i] * g[i];
    Seq f(g.size());
    for (Index k = 0; k <= k_max_; ++k) f[k] = plus_profile_[n][k] * s;
    return f;
  }

  /// One copy of Q: x solved from p with boundary data drawn from q.
  Element q_copy(const Element& p, const Element& q) const {
    Element x(n_max_, k_max_);
    const Seq zero(k_max_ + 1, Real(0));
    x.plus[0] = t2(0, p.plus[1]);
    for (int n = 1; n <= n_max_; ++n) {
      const Seq& next = n < n_max_ ? p.plus[n + 1] : zero;
      const Seq& q_prev = n == 1 ? q.plus[0] : q.minus[n - 2];
      const Seq& p_prev = n == 1 ? p.plus[0] : p.minus[n - 2];
      Seq a = t2(n, next);
      const Seq b = t1(n, q_prev);
      for (Index k = 0; k <= k_max_; ++k) a[k] += b[k];
      x.plus[n] = std::move(a);
      x.minus[n - 1] = t3(n, p_prev);
    }
    return x;
  }

  /// delta x; the mode n_max + 1 output is returned through `leakage`.
  Element delta(const Element& x, Seq& leakage) const {
    Element out(n_max_, k_max_);
    for (int m = 1; m <= n_max_; ++m) {
      out.plus[m] = apply_abar(m - 1, x.plus[m - 1]);
      for (auto& v : out.plus[m]) v = -v;
    }
    out.plus[0] = apply_a(0, x.minus[0]);
    for (int m = 1; m < n_max_; ++m) out.minus[m - 1] = apply_a(m, x.minus[m]);
    leakage = apply_abar(n_max_, x.plus[n_max_]);
    for (auto& v : leakage) v = -v;
    return out;
  }

 private:
  int n_max_;
  Index k_max_;
  std::vector<Seq> bbar_, cplus_, plus_profile_;  // n = 0..n_max
  std::vector<Seq> ba_, cminus_, t1_row_;         // n = 0..n_max-1
};

/// Squared Euclidean norm of x - y over rows k <= last_row.
template <class Real>
double distance_sq(const ExtendedElement<Real>& x, const ExtendedElement<Real>& y,
                   Index last_row) {
  Real sum(0);
  auto add = [&](const std::vector<Real>& a, const std::vector<Real>& b) {
    for (Index k = 0; k <= last_row; ++k) {
      const Real d = a[k] - b[k];
      sum += d * d;
    }
  };
  for (std::size_t n = 0; n < x.plus.size(); ++n) add(x.plus[n], y.plus[n]);
  for (std::size_t n = 0; n < x.minus.size(); ++n) add(x.minus[n], y.minus[n]);
  return static_cast<double>(sum);
}

template <class Real>
double norm_sq(const ExtendedElement<Real>& x, Index last_row) {
  return distance_sq(x, ExtendedElement<Real>(static_cast<int>(x.minus.size()),
                                              static_cast<Index>(x.plus[0].size()) - 1),
                     last_row);
}

struct SampleResidual {
  double dq = 0.0;
  double qd = 0.0;
  double leakage = 0.0;
};

/// Both identity residuals for one sample.
///
/// DQ: ||(DQp - p) on k <= last_row, leakage included|| / ||p||.
/// QD: with z = Q(p) + mu * kernel, ||Q(mask(Dz)) - (z - Cz)|| / ||z||, where
/// C projects onto the kernel along z_0^+(k_max) / P+^(0)(k_max).
template <class Real>
SampleResidual sample_residual(const ExtendedOperators<Real>& ops, const GluedElement& rhs,
                               double mu, Index last_row) {
  using Element = ExtendedElement<Real>;
  using Seq = std::vector<Real>;
  const Index k_max = ops.k_max();
  const Element p(rhs.f), q(rhs.g);
  const Element x = ops.q_copy(p, q);
  const Element y = ops.q_copy(q, p);

  SampleResidual out;
  Seq leak_x, leak_y;
  const Element dx = ops.delta(x, leak_x);
  const Element dy = ops.delta(y, leak_y);
  Real leak_sq(0);
  for (Index k = 0; k <= last_row; ++k) leak_sq += leak_x[k] * leak_x[k] + leak_y[k] * leak_y[k];
  const double leak = static_cast<double>(leak_sq);
  const double dq_sq = distance_sq(dx, p, last_row) + distance_sq(dy, q, last_row) + leak;
  out.dq = std::sqrt(dq_sq / (norm_sq(p, k_max) + norm_sq(q, k_max)));
  out.leakage = std::sqrt(leak);

  const Real m(mu);
  Element zx = x, zy = y;
  for (Index k = 0; k <= k_max; ++k) {
    zx.plus[0][k] += m * ops.plus_profile(0)[k];
    zy.plus[0][k] += m * ops.plus_profile(0)[k];
  }
  Element ex = ops.delta(zx, leak_x);
  Element ey = ops.delta(zy, leak_y);
  for (auto* e : {&ex, &ey}) {
    for (auto& v : e->plus) std::fill(v.begin() + last_row + 1, v.end(), Real(0));
    for (auto& v : e->minus) std::fill(v.begin() + last_row + 1, v.end(), Real(0));
  }
  const Element qx = ops.q_copy(ex, ey);
  const Element qy = ops.q_copy(ey, ex);
  const Real lambda = zx.plus[0][k_max] / ops.plus_profile(0)[k_max];
  Element wx = zx, wy = zy;
  for (Index k = 0; k <= k_max; ++k) {
    wx.plus[0][k] -= lambda * ops.plus_profile(0)[k];
    wy.plus[0][k] -= lambda * ops.plus_profile(0)[k];
  }
  const double qd_sq = distance_sq(qx, wx, k_max) + distance_sq(qy, wy, k_max);
  out.qd = std::sqrt(qd_sq / (norm_sq(zx, k_max) + norm_sq(zy, k_max)));
  return out;
}

}  // namespace qdirac::detail
