#pragma once

#include <Eigen/Core>

namespace qdirac {

using Index = Eigen::Index;

/// Cutoffs and tolerances shared by every finite approximation.
///
/// `k_max` bounds the stored site index, `n_max` the stored Fourier mode,
/// `k_tail` the horizon used for infinite sums and products that have no
/// closed form. `margin` is the edge-exclusion zone near `k_max` used by the
/// identity checks.
struct TruncationSpec {
  int n_max = 16;
  Index k_max = 512;
  Index k_tail = 4096;
  Index margin = 8;
  double tol_identity = 1e-10;
  double tol_tail = 1e-12;
  double tol_trace = 1e-8;

  /// Offset used by the two-point Cauchy check of boundary traces.
  Index trace_delta() const { return k_max / 4; }

  /// Throws Error(kInvalidTruncation) when the cutoffs are inconsistent.
  void check() const;
};

}  // namespace qdirac
