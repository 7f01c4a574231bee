#pragma once

#include <array>
#include <string>
#include <vector>

#include "qdirac/jacobi.hpp"
#include "qdirac/parametrix.hpp"
#include "qdirac/weights.hpp"

namespace qdirac {

/// Largest singular value of m between its weighted spaces, by power
/// iteration on the rescaled matrix diag(a_cod^-1/2) M diag(a_dom^1/2).
/// Stops when successive estimates agree to tol relative. Throws
/// Error(kNoConvergence) after `iterations` steps.
double top_singular_value(const ModeOperator& m, const WeightFamily& family, int iterations = 20000,
                          double tol = 1e-13);

enum class Verdict { kSupported, kNotSupported, kWithheld };

const char* to_string(Verdict verdict);

/// Columns ordered T1, T2, T3.
struct DecayRow {
  int n = 0;
  std::array<double, 3> hs{};
  std::array<double, 3> bound{};
  std::array<double, 3> top_singular{};
  bool pass = false;  // every hs within its bound and above its top singular value
};

struct DecayTable {
  std::vector<DecayRow> rows;
  Verdict verdict = Verdict::kWithheld;
  std::string reason;
  /// Median of ||T3^(n+2)||_HS / ||T3^(n)||_HS over n >= 5 (0 when absent).
  double t3_step2_median = 0.0;
  double t3_step2_max = 0.0;
};

/// HS norms, bounds and top singular values for n in [n_from, n_to].
/// Supported iff every row passes and each HS column is nonincreasing over
/// the top half of the range; withheld when the family fails validation.
DecayTable compactness_report(const ParametrixSet& pset, const AdmissibilityReport& report,
                              int n_from, int n_to);

}  // namespace qdirac
