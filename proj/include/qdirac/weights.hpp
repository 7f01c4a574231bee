#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qdirac/errors.hpp"
#include "qdirac/truncation.hpp"

namespace qdirac {

using Vector = Eigen::VectorXd;

/// Coefficient sequence indexed by Fourier mode n and site k.
using CoefficientFn = std::function<double(int n, Index k)>;

enum class ProductSign { kPlus, kMinus };

/// Coefficient data {a, b, c+, c-} of a Dirac type operator.
///
/// `a` weighs the Hilbert space, `b` scales the one-step difference
/// operators and `c_plus`/`c_minus` are their shift coefficients. The
/// optional closed forms return the exact tail product prod_{i>=k} c(i);
/// `t_bound` is a declared per-mode bound on t(n) checked by `validate`.
struct WeightFamily {
  std::string name;
  CoefficientFn a;
  CoefficientFn b;
  CoefficientFn c_plus;
  CoefficientFn c_minus;
  std::optional<CoefficientFn> closed_tail_product_plus;
  std::optional<CoefficientFn> closed_tail_product_minus;
  std::optional<std::function<double(int n)>> t_bound;

  const CoefficientFn& c(ProductSign sign) const {
    return sign == ProductSign::kPlus ? c_plus : c_minus;
  }
  const std::optional<CoefficientFn>& closed_tail(ProductSign sign) const {
    return sign == ProductSign::kPlus ? closed_tail_product_plus : closed_tail_product_minus;
  }
};

/// The q-weight family built from w(k)^2 = 1 - q^(k+1).
///
/// Throws Error(kInvalidQ) unless 0 <= q < 1.
WeightFamily q_weight_family(double q);

/// w(k) = sqrt(1 - q^(k+1)) for k >= -1, so w(-1) = 0.
double q_weight(double q, Index k);

/// a = b = base_n^n base_k^k with c+ = c- = 1.
WeightFamily geometric_family(double base_n, double base_k);

/// a = b = c+ = c- = 1. Not admissible: sum 1/a diverges.
WeightFamily constant_family();

/// Partial sum of a nonnegative series together with a ratio-test tail
/// estimate.
struct SeriesEstimate {
  double partial = 0.0;
  double tail = 0.0;
  Index terms = 0;
  bool converged = false;

  double value() const { return partial + tail; }
};

/// Sums term(0), term(1), ... until at least `min_terms` terms are in and the
/// last term is below tol * |partial|, or `horizon` is reached. The tail is
/// estimated as geometric from the last two terms.
SeriesEstimate sum_series(const std::function<double(Index)>& term, Index min_terms,
                          Index horizon, double tol);

/// prod_{i=k}^{inf} c(i): the closed form when the family has one, else the
/// finite product up to trunc.k_tail. Throws Error(kTailNotConverged) when the
/// last two partial products differ by more than trunc.tol_tail * |product|.
double tail_product(const WeightFamily& family, ProductSign sign, int n, Index k,
                    const TruncationSpec& trunc);

/// Same as tail_product but never consults the closed form.
double finite_tail_product(const WeightFamily& family, ProductSign sign, int n, Index k,
                           const TruncationSpec& trunc);

/// Tail products prod_{i>=k} c(i) for k = 0..k_max.
Vector tail_product_profile(const WeightFamily& family, ProductSign sign, int n, Index k_max,
                            const TruncationSpec& trunc);

/// Prefix products prod_{i<k} c(i) for k = 0..k_max (empty product is 1).
Vector prefix_product_profile(const WeightFamily& family, ProductSign sign, int n, Index k_max);

struct ConditionVerdict {
  bool pass = true;
  std::optional<ErrorCode> error;
  int witness_n = -1;
  Index witness_k = -1;
  std::string detail;
};

/// Finite-range evidence for the three admissibility conditions.
struct AdmissibilityReport {
  int n_max = 0;
  Index k_max = 0;
  std::vector<SeriesEstimate> s;  // s(n) = sum_k 1/a(n,k)
  std::vector<SeriesEstimate> t;  // t(n) = sum_k a(n,k)/b(n,k)^2
  std::vector<double> t_bound;    // declared bound per n, empty if none
  double kappa = 0.0;
  ConditionVerdict weights;
  ConditionVerdict s_condition;
  ConditionVerdict t_condition;
  ConditionVerdict kappa_condition;
  ConditionVerdict closed_forms;

  bool pass() const {
    return weights.pass && s_condition.pass && t_condition.pass && kappa_condition.pass &&
           closed_forms.pass;
  }
  double s_value(int n) const;
  double t_value(int n) const;
};

/// Checks admissibility over n in [0, n_max] and k in [0, k_max].
AdmissibilityReport validate(const WeightFamily& family, const TruncationSpec& trunc);

}  // namespace qdirac
