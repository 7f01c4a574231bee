#include "qdirac/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace qdirac {

namespace {

constexpr double kOverflowGuard = 1e300;

bool tail_converged(double last_factor, double tol) {
  // |p_H - p_{H-1}| = |p_H| |1 - 1/c(H)| for the forward partial products.
  return last_factor != 0.0 && std::abs(1.0 - 1.0 / last_factor) <= tol;
}

std::vector<double> sample(const CoefficientFn& fn, int n, Index k_max) {
  std::vector<double> out(static_cast<std::size_t>(k_max + 1));
  for (Index k = 0; k <= k_max; ++k) out[static_cast<std::size_t>(k)] = fn(n, k);
  return out;
}

}  // namespace

double q_weight(double q, Index k) {
  return std::sqrt(1.0 - std::pow(q, static_cast<double>(k + 1)));
}

WeightFamily q_weight_family(double q) {
  if (!(q >= 0.0 && q < 1.0)) {
    throw Error(ErrorCode::kInvalidQ, fmt::format("q = {} is outside [0, 1)", q));
  }
  // S(k) = w(k)^2 - w(k-1)^2 = (1-q) q^k, extended geometrically to k = -1.
  auto S = [q](Index k) { return (1.0 - q) * std::pow(q, static_cast<double>(k)); };
  auto w = [q](Index k) { return q_weight(q, k); };
  auto a = [S](int n, Index k) { return 1.0 / (std::sqrt(S(k)) * std::sqrt(S(k + n))); };

  WeightFamily family;
  family.name = fmt::format("q-weight(q={})", q);
  family.a = a;
  // w(-1) = 0 would zero b at (n, k) = (0, 0); the index is clamped at 0.
  family.b = [a, w](int n, Index k) {
    return a(n - 1, k) * w(std::max<Index>(k + n - 1, 0));
  };
  family.c_plus = [w](int n, Index k) { return w(k) / w(k + n); };
  family.c_minus = [w](int n, Index k) {
    const double v = w(k + n + 1);
    return w(k) * w(k + n) / (v * v);
  };
  family.closed_tail_product_plus = [w](int n, Index k) {
    double p = 1.0;
    for (int j = 0; j < n; ++j) p *= w(k + j);
    return p;
  };
  family.closed_tail_product_minus = [w](int n, Index k) {
    double p = w(k + n);
    for (int j = 0; j <= n; ++j) p *= w(k + j);
    return p;
  };
  family.t_bound = [q](int n) { return std::pow(q, (n - 2) / 2.0) / (1.0 - q); };
  return family;
}

WeightFamily geometric_family(double base_n, double base_k) {
  WeightFamily family;
  family.name = fmt::format("geometric(base_n={}, base_k={})", base_n, base_k);
  auto a = [base_n, base_k](int n, Index k) {
    return std::pow(base_n, n) * std::pow(base_k, static_cast<double>(k));
  };
  family.a = a;
  family.b = a;
  family.c_plus = [](int, Index) { return 1.0; };
  family.c_minus = [](int, Index) { return 1.0; };
  family.closed_tail_product_plus = [](int, Index) { return 1.0; };
  family.closed_tail_product_minus = [](int, Index) { return 1.0; };
  return family;
}

WeightFamily constant_family() {
  WeightFamily family;
  family.name = "constant";
  auto one = [](int, Index) { return 1.0; };
  family.a = one;
  family.b = one;
  family.c_plus = one;
  family.c_minus = one;
  return family;
}

SeriesEstimate sum_series(const std::function<double(Index)>& term, Index min_terms,
                          Index horizon, double tol) {
  SeriesEstimate est;
  double prev = 0.0;
  for (Index k = 0; k <= horizon; ++k) {
    const double t = term(k);
    est.terms = k + 1;
    if (!std::isfinite(t)) return est;
    est.partial += t;
    if (std::abs(est.partial) > kOverflowGuard) return est;
    if (est.terms >= min_terms && k >= 1 && std::abs(t) <= tol * std::abs(est.partial)) {
      const double ratio = prev != 0.0 ? t / prev : 0.0;
      est.tail = (ratio >= 0.0 && ratio < 1.0) ? t * ratio / (1.0 - ratio) : 0.0;
      est.converged = true;
      return est;
    }
    prev = t;
  }
  return est;
}

double finite_tail_product(const WeightFamily& family, ProductSign sign, int n, Index k,
                           const TruncationSpec& trunc) {
  if (k < 0 || k > trunc.k_tail) {
    throw Error(ErrorCode::kIndexMismatch,
                fmt::format("tail product start {} outside [0, k_tail={}]", k, trunc.k_tail));
  }
  const auto& c = family.c(sign);
  double p = 1.0;
  double last = 1.0;
  for (Index i = k; i <= trunc.k_tail; ++i) {
    last = c(n, i);
    p *= last;
  }
  if (!std::isfinite(p) || !tail_converged(last, trunc.tol_tail)) {
    throw Error(ErrorCode::kTailNotConverged,
                fmt::format("product of c{}^({}) from k={} not stable at horizon {}",
                            sign == ProductSign::kPlus ? '+' : '-', n, k, trunc.k_tail));
  }
  return p;
}

double tail_product(const WeightFamily& family, ProductSign sign, int n, Index k,
                    const TruncationSpec& trunc) {
  if (const auto& closed = family.closed_tail(sign)) return (*closed)(n, k);
  return finite_tail_product(family, sign, n, k, trunc);
}

Vector tail_product_profile(const WeightFamily& family, ProductSign sign, int n, Index k_max,
                            const TruncationSpec& trunc) {
  Vector profile(k_max + 1);
  if (const auto& closed = family.closed_tail(sign)) {
    for (Index k = 0; k <= k_max; ++k) profile[k] = (*closed)(n, k);
    return profile;
  }
  const Index horizon = std::max(trunc.k_tail, k_max);
  const auto& c = family.c(sign);
  const double last = c(n, horizon);
  if (!tail_converged(last, trunc.tol_tail)) {
    throw Error(ErrorCode::kTailNotConverged,
                fmt::format("c^({}) factor at horizon {} is {}, product not stable", n,
                            horizon, last));
  }
  double p = 1.0;
  for (Index i = horizon; i > k_max; --i) p *= c(n, i);
  for (Index k = k_max; k >= 0; --k) {
    p *= c(n, k);
    profile[k] = p;
  }
  return profile;
}

Vector prefix_product_profile(const WeightFamily& family, ProductSign sign, int n,
                              Index k_max) {
  const auto& c = family.c(sign);
  Vector prefix(k_max + 1);
  prefix[0] = 1.0;
  for (Index k = 1; k <= k_max; ++k) prefix[k] = prefix[k - 1] * c(n, k - 1);
  return prefix;
}

double AdmissibilityReport::s_value(int n) const {
  if (n < 0 || n >= static_cast<int>(s.size())) {
    throw Error(ErrorCode::kIndexMismatch, fmt::format("s({}) outside validated range", n));
  }
  return s[static_cast<std::size_t>(n)].value();
}

double AdmissibilityReport::t_value(int n) const {
  if (n < 0 || n >= static_cast<int>(t.size())) {
    throw Error(ErrorCode::kIndexMismatch, fmt::format("t({}) outside validated range", n));
  }
  return t[static_cast<std::size_t>(n)].value();
}

AdmissibilityReport validate(const WeightFamily& family, const TruncationSpec& trunc) {
  trunc.check();
  const int n_max = trunc.n_max;
  const Index k_max = trunc.k_max;

  AdmissibilityReport report;
  report.n_max = n_max;
  report.k_max = k_max;

  auto fail = [](ConditionVerdict& v, std::optional<ErrorCode> code, int n, Index k,
                 std::string detail) {
    if (!v.pass) return;
    v.pass = false;
    v.error = code;
    v.witness_n = n;
    v.witness_k = k;
    v.detail = std::move(detail);
  };

  for (int n = 0; n <= n_max; ++n) {
    for (Index k = 0; k <= k_max; ++k) {
      const double a = family.a(n, k);
      const double b = family.b(n, k);
      if (!std::isfinite(a) || !std::isfinite(b)) {
        fail(report.weights, ErrorCode::kNonFiniteWeight, n, k,
             fmt::format("a={} b={} not representable", a, b));
      } else if (a <= 0.0 || b <= 0.0) {
        fail(report.weights, ErrorCode::kNonPositiveWeight, n, k,
             fmt::format("a={} b={}", a, b));
      }
    }
  }

  for (int n = 0; n <= n_max; ++n) {
    auto s = sum_series([&](Index k) { return 1.0 / family.a(n, k); }, k_max + 1, trunc.k_tail,
                        trunc.tol_tail);
    if (!s.converged) {
      fail(report.s_condition, ErrorCode::kDivergentSum, n, s.terms,
           fmt::format("sum 1/a not stable after {} terms (partial {})", s.terms, s.partial));
    }
    auto t = sum_series(
        [&](Index k) {
          const double b = family.b(n, k);
          return (family.a(n, k) / b) / b;
        },
        k_max + 1, trunc.k_tail, trunc.tol_tail);
    if (!t.converged) {
      fail(report.t_condition, ErrorCode::kDivergentSum, n, t.terms,
           fmt::format("sum a/b^2 not stable after {} terms (partial {})", t.terms, t.partial));
    }
    report.s.push_back(s);
    report.t.push_back(t);
  }

  for (int n = 1; n <= n_max; ++n) {
    const double prev = report.s_value(n - 1);
    const double cur = report.s_value(n);
    if (report.s_condition.pass && !(cur <= prev * (1.0 + 1e-12))) {
      fail(report.s_condition, std::nullopt, n, -1,
           fmt::format("s({}) = {} exceeds s({}) = {}", n, cur, n - 1, prev));
    }
  }

  if (family.t_bound) {
    for (int n = 0; n <= n_max; ++n) {
      const double bound = (*family.t_bound)(n);
      report.t_bound.push_back(bound);
      if (report.t_condition.pass && !(report.t_value(n) <= bound * (1.0 + 1e-12))) {
        fail(report.t_condition, std::nullopt, n, -1,
             fmt::format("t({}) = {} exceeds declared bound {}", n, report.t_value(n), bound));
      }
    }
  }

  // kappa <= prod_{k=M}^{N} c(k) <= 1/kappa over all sampled 0 <= M <= N <= k_max.
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (ProductSign sign : {ProductSign::kPlus, ProductSign::kMinus}) {
    for (int n = 0; n <= n_max && report.kappa_condition.pass; ++n) {
      const auto c = sample(family.c(sign), n, k_max);
      for (Index m = 0; m <= k_max && report.kappa_condition.pass; ++m) {
        double p = 1.0;
        for (Index k = m; k <= k_max; ++k) {
          p *= c[static_cast<std::size_t>(k)];
          if (!(p > 0.0) || !std::isfinite(p)) {
            fail(report.kappa_condition, ErrorCode::kNonPositiveWeight, n, k,
                 fmt::format("partial product from M={} reaches {}", m, p));
            break;
          }
          lo = std::min(lo, p);
          hi = std::max(hi, p);
        }
      }
    }
  }
  report.kappa = report.kappa_condition.pass ? std::min({1.0, lo, 1.0 / hi}) : 0.0;

  for (ProductSign sign : {ProductSign::kPlus, ProductSign::kMinus}) {
    const auto& closed = family.closed_tail(sign);
    if (!closed) continue;
    for (int n = 0; n <= n_max; ++n) {
      for (Index k : {Index{0}, k_max / 2, k_max}) {
        double finite = 0.0;
        try {
          finite = finite_tail_product(family, sign, n, k, trunc);
        } catch (const Error& e) {
          fail(report.closed_forms, e.code(), n, k, e.what());
          continue;
        }
        const double exact = (*closed)(n, k);
        if (!(std::abs(exact - finite) <= trunc.tol_tail * std::abs(exact))) {
          fail(report.closed_forms, std::nullopt, n, k,
               fmt::format("closed tail product {} vs finite {}", exact, finite));
        }
      }
    }
  }
  return report;
}

}  // namespace qdirac
