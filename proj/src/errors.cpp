#include "qdirac/errors.hpp"

#include "qdirac/truncation.hpp"

namespace qdirac {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidQ: return "InvalidQ";
    case ErrorCode::kInvalidTruncation: return "InvalidTruncation";
    case ErrorCode::kNonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::kNonFiniteWeight: return "NonFiniteWeight";
    case ErrorCode::kDivergentSum: return "DivergentSum";
    case ErrorCode::kTailNotConverged: return "TailNotConverged";
    case ErrorCode::kIndexMismatch: return "IndexMismatch";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kTraceNotConverged: return "TraceNotConverged";
    case ErrorCode::kGridTooCoarse: return "GridTooCoarse";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kConfigParse: return "ConfigParse";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void TruncationSpec::check() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidTruncation, what); };
  if (n_max < 1) fail("n_max must be >= 1");
  if (k_max < 2) fail("k_max must be >= 2");
  if (k_tail < k_max) fail("k_tail must be >= k_max");
  if (margin < 0 || 4 * margin >= k_max) fail("margin must satisfy 0 <= margin < k_max/4");
  for (double tol : {tol_identity, tol_tail, tol_trace}) {
    if (!(tol > 0.0 && tol < 1.0)) fail("tolerances must lie in (0, 1)");
  }
}

}  // namespace qdirac
