#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qvolterra {

enum class ErrorCode {
  kNone = 0,
  // simplex_core
  kNotNormalized,
  kNegativeWeight,
  kDuplicateIndex,
  kInvalidIndex,
  // skew_matrix
  kNotSkew,
  kBoundExceeded,
  kNonzeroDiagonal,
  kNotVolterra,
  kNotStochastic,
  kDimensionMismatch,
  // operator / dynamics
  kSupportOverflow,
  kTrajectoryTooShort,
  kBoundViolated,
  kLimitNotInQ,
  kFixViolation,
  // qset
  kCyclingDetected,
  kBlockInfeasible,
  kUnexpectedlyFeasible,
  // generic
  kInvalidArgument,
  kConfigError,
};

std::string_view to_string(ErrorCode code);

// Exception carrying a machine-readable code. Thrown for invalid inputs and
// violated preconditions; checks that report on mathematical properties
// return a Verdict instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Outcome of a property check. `ok == false` carries the failing code and a
// human-readable location.
struct Verdict {
  bool ok = true;
  ErrorCode code = ErrorCode::kNone;
  std::string detail;

  static Verdict pass(std::string detail = {}) { return {true, ErrorCode::kNone, std::move(detail)}; }
  static Verdict fail(ErrorCode code, std::string detail) { return {false, code, std::move(detail)}; }

  explicit operator bool() const noexcept { return ok; }
};

}  // namespace qvolterra
