#include "qdirac/parametrix.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include <boost/multiprecision/mpfr.hpp>
#include <fmt/format.h>

#include "qdirac/detail/extended.hpp"
#include "qdirac/errors.hpp"

namespace qdirac {

namespace {

using Triplet = Eigen::Triplet<double>;

constexpr double kQdTolerance = 1e-8;

std::vector<double> sample(const CoefficientFn& fn, int n, Index k_max) {
  std::vector<double> out(static_cast<std::size_t>(k_max + 1));
  for (Index k = 0; k <= k_max; ++k) out[static_cast<std::size_t>(k)] = fn(n, k);
  return out;
}

ModeOperator make_operator(int n, OperatorKind kind, Index k_max, int dom, int cod,
                           const std::vector<Triplet>& triplets) {
  ModeOperator op;
  op.n = n;
  op.kind = kind;
  op.k_max = k_max;
  op.domain_weight = dom;
  op.codomain_weight = cod;
  op.entries.resize(k_max + 1, k_max + 1);
  op.entries.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

double restricted_norm_sq(const FourierElement& x, Index last_row) {
  double sum = 0.0;
  for (int n = 0; n <= x.n_max(); ++n) {
    sum += x.plus(n).head(last_row + 1).squaredNorm();
    if (n >= 1) sum += x.minus(n).head(last_row + 1).squaredNorm();
  }
  return sum;
}

}  // namespace

ParametrixSet::ParametrixSet(WeightFamily family, TruncationSpec trunc)
    : family_(std::move(family)), trunc_(trunc) {
  trunc_.check();
  const int n_max = trunc_.n_max;
  const Index k_max = trunc_.k_max;
  plus_profile_.resize(static_cast<std::size_t>(n_max + 1));
  t1_row_.resize(static_cast<std::size_t>(n_max + 1));
  for (int n = 0; n <= n_max; ++n) {
    plus_profile_[n] = tail_product_profile(family_, ProductSign::kPlus, n, k_max, trunc_);
    if (n == 0) continue;
    Vector row = tail_product_profile(family_, ProductSign::kMinus, n - 1, k_max, trunc_);
    for (Index i = 0; i <= k_max; ++i) row[i] /= family_.b(n - 1, i);
    t1_row_[n] = std::move(row);
  }
}

void ParametrixSet::require_mode(OperatorKind kind, int n) const {
  const int lo = kind == OperatorKind::kT2 ? 0 : 1;
  const bool known =
      kind == OperatorKind::kT1 || kind == OperatorKind::kT2 || kind == OperatorKind::kT3;
  if (!known || n < lo || n > trunc_.n_max) {
    throw Error(ErrorCode::kIndexMismatch,
                fmt::format("{}^({}) is not part of the parametrix set", to_string(kind), n));
  }
}

const Vector& ParametrixSet::plus_profile(int n) const {
  require_mode(OperatorKind::kT2, n);
  return plus_profile_[n];
}

const Vector& ParametrixSet::t1_row(int n) const {
  require_mode(OperatorKind::kT1, n);
  return t1_row_[n];
}

Vector ParametrixSet::apply_T(OperatorKind kind, int n, const Vector& f) const {
  require_mode(kind, n);
  if (f.size() != trunc_.k_max + 1) {
    throw Error(ErrorCode::kShapeMismatch, "vector length does not match the truncation");
  }
  switch (kind) {
    case OperatorKind::kT1: return plus_profile_[n] * t1_row_[n].dot(f);
    case OperatorKind::kT2: return solve_Abar(family_, n, f, 0.0, trunc_);
    default: return solve_A(family_, n - 1, f);
  }
}

ModeOperator ParametrixSet::matrix(OperatorKind kind, int n) const {
  require_mode(kind, n);
  const Index k_max = trunc_.k_max;
  const std::size_t len = static_cast<std::size_t>(k_max + 1);
  std::vector<Triplet> t;
  switch (kind) {
    case OperatorKind::kT1: {
      t.reserve(len * len);
      for (Index k = 0; k <= k_max; ++k) {
        for (Index i = 0; i <= k_max; ++i) {
          t.emplace_back(k, i, plus_profile_[n][k] * t1_row_[n][i]);
        }
      }
      return make_operator(n, kind, k_max, n - 1, n, t);
    }
    case OperatorKind::kT2: {
      // -(1/b^(n+1)(i)) prod_{j=k}^{i-1} c+^(n)(j) for i >= k.
      const auto b = sample(family_.b, n + 1, k_max);
      const auto c = sample(family_.c_plus, n, k_max);
      t.reserve(len * (len + 1) / 2);
      for (Index k = 0; k <= k_max; ++k) {
        double p = 1.0;
        for (Index i = k; i <= k_max; ++i) {
          t.emplace_back(k, i, -p / b[i]);
          p *= c[i];
        }
      }
      return make_operator(n, kind, k_max, n + 1, n, t);
    }
    default: {
      // (1/b^(n-1)(i)) prod_{j=i}^{k-1} c-^(n-1)(j) for i <= k.
      const auto b = sample(family_.b, n - 1, k_max);
      const auto c = sample(family_.c_minus, n - 1, k_max);
      t.reserve(len * (len + 1) / 2);
      for (Index i = 0; i <= k_max; ++i) {
        double p = 1.0;
        for (Index k = i; k <= k_max; ++k) {
          t.emplace_back(k, i, p / b[i]);
          p *= c[k];
        }
      }
      return make_operator(n, kind, k_max, n - 1, n, t);
    }
  }
}

GluedElement ParametrixSet::apply_Q(const GluedElement& rhs) const {
  const int n_max = trunc_.n_max;
  const Index k_max = trunc_.k_max;
  for (const auto* part : {&rhs.f, &rhs.g}) {
    if (part->n_max() != n_max || part->k_max() != k_max) {
      throw Error(ErrorCode::kShapeMismatch, "rhs shape does not match the truncation");
    }
  }
  const Vector zero = Vector::Zero(k_max + 1);
  // First copy solved from p with boundary data from q, and the mirror.
  auto solve = [&](const FourierElement& p, const FourierElement& q) {
    FourierElement x(n_max, k_max);
    x.plus(0) = apply_T(OperatorKind::kT2, 0, p.plus(1));
    for (int n = 1; n <= n_max; ++n) {
      const Vector& next = n < n_max ? p.plus(n + 1) : zero;
      const Vector& q_prev = n == 1 ? q.plus(0) : q.minus(n - 1);
      const Vector& p_prev = n == 1 ? p.plus(0) : p.minus(n - 1);
      x.plus(n) = apply_T(OperatorKind::kT2, n, next) + apply_T(OperatorKind::kT1, n, q_prev);
      x.minus(n) = apply_T(OperatorKind::kT3, n, p_prev);
    }
    return x;
  };
  return GluedElement(solve(rhs.f, rhs.g), solve(rhs.g, rhs.f));
}

GluedElement ParametrixSet::apply_C(const GluedElement& x) const {
  const int n_max = trunc_.n_max;
  const Index k_max = trunc_.k_max;
  if (x.f.n_max() != n_max || x.f.k_max() != k_max) {
    throw Error(ErrorCode::kShapeMismatch, "element shape does not match the truncation");
  }
  const double lambda = x.f.plus(0)[k_max] / plus_profile_[0][k_max];
  GluedElement out(n_max, k_max);
  out.f.plus(0) = lambda * plus_profile_[0];
  out.g.plus(0) = out.f.plus(0);
  return out;
}

GluedElement random_admissible_rhs(const TruncationSpec& trunc, std::uint64_t seed,
                                   std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  const Index support = trunc.k_max - trunc.margin;
  GluedElement rhs(trunc.n_max, trunc.k_max);
  for (auto* part : {&rhs.f, &rhs.g}) {
    for (int n = 0; n < trunc.n_max; ++n) {
      for (Index k = 0; k <= support; ++k) part->plus(n)[k] = coeff(rng);
      if (n == 0) continue;
      for (Index k = 0; k <= support; ++k) part->minus(n)[k] = coeff(rng);
    }
  }
  return rhs;
}

GluedElement mask_rows(GluedElement x, Index last_row) {
  const Index tail = x.f.k_max() - last_row;
  if (tail <= 0) return x;
  for (auto* part : {&x.f, &x.g}) {
    for (int n = 0; n <= part->n_max(); ++n) {
      part->plus(n).tail(tail).setZero();
      if (n >= 1) part->minus(n).tail(tail).setZero();
    }
  }
  return x;
}

int required_precision_bits(const WeightFamily& family, const TruncationSpec& trunc) {
  double log2_b = 0.0;
  for (int n = 0; n <= trunc.n_max + 1; ++n) {
    for (Index k = 0; k <= trunc.k_max; ++k) {
      log2_b = std::max(log2_b, std::log2(std::abs(family.b(n, k))));
    }
  }
  return 53 + static_cast<int>(std::ceil(log2_b - std::log2(trunc.tol_identity))) + 16;
}

namespace {

template <unsigned Digits10>
using Mpfr = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<Digits10>,
                                           boost::multiprecision::et_off>;

template <class Real>
int run_extended(const ParametrixSet& pset, const std::vector<GluedElement>& rhs,
                 const std::vector<double>& mu, std::vector<detail::SampleResidual>& out) {
  const TruncationSpec& trunc = pset.truncation();
  const detail::ExtendedOperators<Real> ops(pset.family(), trunc);
  const int samples = static_cast<int>(rhs.size());
#pragma omp parallel for schedule(static)
  for (int s = 0; s < samples; ++s) {
    out[s] = detail::sample_residual(ops, rhs[s], mu[s], trunc.k_max - trunc.margin);
  }
  return std::numeric_limits<Real>::digits;
}

}  // namespace

IdentityReport verify_identities(const ParametrixSet& pset, const GluedDirac& op, int samples,
                                 std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::kInvalidTruncation, "samples must be >= 1");
  const TruncationSpec& trunc = pset.truncation();
  if (op.truncation().n_max != trunc.n_max || op.truncation().k_max != trunc.k_max) {
    throw Error(ErrorCode::kShapeMismatch, "operator and parametrix truncations differ");
  }
  const Index last_row = trunc.k_max - trunc.margin;

  std::vector<GluedElement> rhs(samples);
  std::vector<double> mu(samples);
  for (int s = 0; s < samples; ++s) {
    rhs[s] = random_admissible_rhs(trunc, seed, static_cast<std::uint64_t>(s));
    // Independent stream for the kernel weight.
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(s), 1u};
    std::mt19937_64 rng(seq);
    mu[s] = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
  }

  std::vector<double> dq_double(samples);
#pragma omp parallel for schedule(static)
  for (int s = 0; s < samples; ++s) {
    const GluedElement x = pset.apply_Q(rhs[s]);
    const GluedElement dx = op.apply_D(x);
    double err_sq = restricted_norm_sq(dx.f - rhs[s].f, last_row) +
                    restricted_norm_sq(dx.g - rhs[s].g, last_row);
    for (const auto* part : {&x.f, &x.g}) {
      err_sq += op.abar(trunc.n_max).apply(part->plus(trunc.n_max)).head(last_row + 1).squaredNorm();
    }
    dq_double[s] = std::sqrt(err_sq) / rhs[s].coefficient_norm();
  }

  std::vector<detail::SampleResidual> res(samples);
  const int bits = required_precision_bits(pset.family(), trunc);
  int used = 0;
  if (bits <= 53) {
    used = run_extended<double>(pset, rhs, mu, res);
  } else if (bits <= 330) {
    used = run_extended<Mpfr<100>>(pset, rhs, mu, res);
  } else if (bits <= 825) {
    used = run_extended<Mpfr<250>>(pset, rhs, mu, res);
  } else if (bits <= 1325) {
    used = run_extended<Mpfr<400>>(pset, rhs, mu, res);
  } else {
    used = run_extended<Mpfr<800>>(pset, rhs, mu, res);
  }

  IdentityReport report;
  report.samples = samples;
  report.seed = seed;
  report.precision_bits = used;
  for (const auto& r : res) {
    report.dq_max_residual = std::max(report.dq_max_residual, r.dq);
    report.qd_max_residual = std::max(report.qd_max_residual, r.qd);
    report.max_leakage = std::max(report.max_leakage, r.leakage);
  }
  report.dq_double_residual = *std::max_element(dq_double.begin(), dq_double.end());
  report.tol_dq = trunc.tol_identity;
  report.tol_qd = kQdTolerance;
  report.dq_pass = report.dq_max_residual <= report.tol_dq;
  report.qd_pass = report.qd_max_residual <= report.tol_qd;
  return report;
}

double hs_norm(const ModeOperator& m, const WeightFamily& family) {
  const Index size = m.entries.cols();
  Vector dom(size), cod(m.entries.rows());
  for (Index i = 0; i < size; ++i) dom[i] = std::sqrt(family.a(m.domain_weight, i));
  for (Index k = 0; k < cod.size(); ++k) cod[k] = 1.0 / std::sqrt(family.a(m.codomain_weight, k));
  double sum = 0.0;
  for (Index k = 0; k < m.entries.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m.entries, k); it; ++it) {
      const double v = it.value() * dom[it.col()] * cod[k];
      sum += v * v;
    }
  }
  return std::sqrt(sum);
}

std::vector<HsRow> hs_norms(const ParametrixSet& pset, const AdmissibilityReport& report,
                            int n_from, int n_to) {
  if (n_from < 1 || n_to < n_from || n_to + 1 > report.n_max || n_to > pset.truncation().n_max) {
    throw Error(ErrorCode::kIndexMismatch,
                fmt::format("HS range {}..{} needs validation and truncation to n >= {}", n_from,
                            n_to, n_to + 1));
  }
  const double kappa = report.kappa;
  const std::size_t count = static_cast<std::size_t>(n_to - n_from + 1);
  std::vector<HsRow> rows(3 * count);
#pragma omp parallel for schedule(dynamic)
  for (int idx = 0; idx < static_cast<int>(rows.size()); ++idx) {
    const int n = n_from + idx / 3;
    const OperatorKind kind =
        std::array{OperatorKind::kT1, OperatorKind::kT2, OperatorKind::kT3}[idx % 3];
    HsRow row;
    row.kind = kind;
    row.n = n;
    row.hs = hs_norm(pset.matrix(kind, n), pset.family());
    const double s = report.s_value(n);
    switch (kind) {
      case OperatorKind::kT1: row.bound = std::sqrt(s * report.t_value(n - 1)) / (kappa * kappa); break;
      case OperatorKind::kT2: row.bound = std::sqrt(s * report.t_value(n + 1)) / kappa; break;
      default: row.bound = std::sqrt(s * report.t_value(n - 1)) / kappa; break;
    }
    row.pass = std::isfinite(row.hs) && row.hs <= row.bound;
    rows[static_cast<std::size_t>(idx)] = row;
  }
  return rows;
}

}  // namespace qdirac
