#include "qdirac/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "qdirac/errors.hpp"

namespace qdirac {

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kSupported: return "supported";
    case Verdict::kNotSupported: return "not supported";
    case Verdict::kWithheld: return "withheld";
  }
  return "unknown";
}

double top_singular_value(const ModeOperator& m, const WeightFamily& family, int iterations,
                          double tol) {
  if (iterations < 1) throw Error(ErrorCode::kNoConvergence, "iterations must be >= 1");
  Eigen::MatrixXd mt = m.dense();
  for (Index k = 0; k < mt.rows(); ++k) mt.row(k) /= std::sqrt(family.a(m.codomain_weight, k));
  for (Index i = 0; i < mt.cols(); ++i) mt.col(i) *= std::sqrt(family.a(m.domain_weight, i));
  if (mt.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  Vector v(mt.cols());
  for (Index i = 0; i < v.size(); ++i) v[i] = coeff(rng);
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const Vector w = mt * v;
    const double next = w.norm();
    Vector u = mt.transpose() * w;
    const double un = u.norm();
    if (un == 0.0) return next;
    v = u / un;
    if (std::abs(next - sigma) <= tol * next) return next;
    sigma = next;
  }
  throw Error(ErrorCode::kNoConvergence,
              fmt::format("{}^({}) power iteration did not settle in {} steps", to_string(m.kind),
                          m.n, iterations));
}

DecayTable compactness_report(const ParametrixSet& pset, const AdmissibilityReport& report,
                              int n_from, int n_to) {
  DecayTable table;
  if (!report.pass()) {
    table.verdict = Verdict::kWithheld;
    table.reason = "family failed validation";
    for (const auto* c : {&report.weights, &report.s_condition, &report.t_condition,
                          &report.kappa_condition, &report.closed_forms}) {
      if (!c->pass) {
        table.reason += ": " + c->detail;
        break;
      }
    }
    return table;
  }
  const std::vector<HsRow> hs = hs_norms(pset, report, n_from, n_to);
  const int count = n_to - n_from + 1;
  table.rows.resize(static_cast<std::size_t>(count));
  std::vector<double> sv(hs.size());
#pragma omp parallel for schedule(dynamic)
  for (int idx = 0; idx < static_cast<int>(hs.size()); ++idx) {
    sv[idx] = top_singular_value(pset.matrix(hs[idx].kind, hs[idx].n), pset.family());
  }
  for (int r = 0; r < count; ++r) {
    DecayRow& row = table.rows[r];
    row.n = n_from + r;
    row.pass = true;
    for (int c = 0; c < 3; ++c) {
      const std::size_t idx = static_cast<std::size_t>(3 * r + c);
      row.hs[c] = hs[idx].hs;
      row.bound[c] = hs[idx].bound;
      row.top_singular[c] = sv[idx];
      row.pass = row.pass && hs[idx].pass && sv[idx] <= hs[idx].hs * (1.0 + 1e-12);
    }
  }

  std::vector<double> ratios;
  for (int r = 0; r + 2 < count; ++r) {
    const double ratio = table.rows[r + 2].hs[2] / table.rows[r].hs[2];
    table.t3_step2_max = std::max(table.t3_step2_max, ratio);
    if (table.rows[r].n >= 5) ratios.push_back(ratio);
  }
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    const std::size_t h = ratios.size() / 2;
    table.t3_step2_median =
        ratios.size() % 2 ? ratios[h] : 0.5 * (ratios[h - 1] + ratios[h]);
  }

  for (const auto& row : table.rows) {
    if (!row.pass) {
      table.verdict = Verdict::kNotSupported;
      table.reason = fmt::format("row n={} breaks a bound or singular value dominance", row.n);
      return table;
    }
  }
  for (int r = count / 2; r + 1 < count; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (table.rows[r + 1].hs[c] > table.rows[r].hs[c]) {
        table.verdict = Verdict::kNotSupported;
        table.reason = fmt::format("HS column {} increases from n={} to n={}", c + 1,
                                   table.rows[r].n, table.rows[r + 1].n);
        return table;
      }
    }
  }
  table.verdict = Verdict::kSupported;
  table.reason = "all HS norms within bounds and decreasing over the top half of the range";
  return table;
}

}  // namespace qdirac
