#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qdirac {

enum class ErrorCode {
  kInvalidQ,
  kInvalidTruncation,
  kNonPositiveWeight,
  kNonFiniteWeight,
  kDivergentSum,
  kTailNotConverged,
  kIndexMismatch,
  kShapeMismatch,
  kTraceNotConverged,
  kGridTooCoarse,
  kNoConvergence,
  kConfigParse,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI and the Python layer can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qdirac
