#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "qdirac/dirac.hpp"
#include "qdirac/hilbert.hpp"
#include "qdirac/jacobi.hpp"
#include "qdirac/truncation.hpp"
#include "qdirac/weights.hpp"

namespace qdirac {

/// The integral operators T1, T2, T3 per mode and the rank-one C.
///
/// Weighted bookkeeping: T1^(n), T3^(n) map l2_{a^(n-1)} -> l2_{a^(n)} and
/// T2^(n) maps l2_{a^(n+1)} -> l2_{a^(n)}. Application is O(k_max) through
/// the difference recursions; `matrix` assembles the entries from the sum
/// formulas directly.
class ParametrixSet {
 public:
  ParametrixSet(WeightFamily family, TruncationSpec trunc);

  const WeightFamily& family() const { return family_; }
  const TruncationSpec& truncation() const { return trunc_; }

  /// T2 for n in [0, n_max]; T1 and T3 for n in [1, n_max].
  Vector apply_T(OperatorKind kind, int n, const Vector& f) const;
  ModeOperator matrix(OperatorKind kind, int n) const;

  /// Right inverse of D on right-hand sides whose modes stop at n_max - 1.
  GluedElement apply_Q(const GluedElement& rhs) const;
  /// Projection onto the kernel direction along the boundary value at
  /// infinity of the mode-0 plus coefficient of the first copy.
  GluedElement apply_C(const GluedElement& x) const;

  /// prod_{i>=k} c+^(n)(i), n in [0, n_max].
  const Vector& plus_profile(int n) const;
  /// (1/b^(n-1)(i)) prod_{j>=i} c-^(n-1)(j), the row vector of T1^(n).
  const Vector& t1_row(int n) const;

 private:
  void require_mode(OperatorKind kind, int n) const;

  WeightFamily family_;
  TruncationSpec trunc_;
  std::vector<Vector> plus_profile_;
  std::vector<Vector> t1_row_;  // index n, entry 0 unused
};

/// Uniform [-1, 1] coefficients on plus modes 0..n_max-1 and minus modes
/// 1..n_max-1, supported on k <= k_max - margin. Deterministic in
/// (seed, index).
GluedElement random_admissible_rhs(const TruncationSpec& trunc, std::uint64_t seed,
                                   std::uint64_t index);

/// Zeroes every coefficient with k > last_row.
GluedElement mask_rows(GluedElement x, Index last_row);

struct IdentityReport {
  int samples = 0;
  std::uint64_t seed = 0;
  int precision_bits = 0;        // working precision of the residual evaluation
  double dq_max_residual = 0.0;  // ||(DQ p - p) on k <= K - margin|| / ||p||
  double qd_max_residual = 0.0;  // ||QD x - (I - C) x|| / ||x||
  double max_leakage = 0.0;      // mode n_max + 1 output, included in dq
  double dq_double_residual = 0.0;  // same DQ residual evaluated in double
  double tol_dq = 0.0;
  double tol_qd = 0.0;
  bool dq_pass = false;
  bool qd_pass = false;

  bool pass() const { return dq_pass && qd_pass; }
};

/// Bits needed so that rounding in D, amplified by the largest b(k), stays
/// below tol_identity: 53 + log2(max b) + log2(1 / tol_identity) + 16.
int required_precision_bits(const WeightFamily& family, const TruncationSpec& trunc);

/// DQ = I on random admissible right-hand sides and QD = I - C on
/// z = Q(p) + mu * kernel with mu uniform in [-1, 1]. QD is evaluated as
/// Q(mask(Dz)), masking rows beyond k_max - margin. Both residuals are
/// evaluated at `required_precision_bits` (double when 53 bits suffice);
/// the double-precision DQ residual is reported alongside. Tolerances are
/// tol_identity for DQ and 1e-8 for QD.
IdentityReport verify_identities(const ParametrixSet& pset, const GluedDirac& op, int samples,
                                 std::uint64_t seed);

/// sum_{k,i} |M(k,i)|^2 a_dom(i) / a_cod(k) with the operator's weight indices.
double hs_norm(const ModeOperator& m, const WeightFamily& family);

struct HsRow {
  OperatorKind kind = OperatorKind::kT1;
  int n = 0;
  double hs = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// HS norms of T1, T2, T3 for n in [n_from, n_to] against
/// T1: sqrt(s(n) t(n-1))/kappa^2, T2: sqrt(s(n) t(n+1))/kappa,
/// T3: sqrt(s(n) t(n-1))/kappa. Needs the report validated to n_to + 1.
std::vector<HsRow> hs_norms(const ParametrixSet& pset, const AdmissibilityReport& report,
                            int n_from, int n_to);

}  // namespace qdirac
