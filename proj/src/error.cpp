#include "qvolterra/error.hpp"

namespace qvolterra {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNone: return "None";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kNegativeWeight: return "NegativeWeight";
    case ErrorCode::kDuplicateIndex: return "DuplicateIndex";
    case ErrorCode::kInvalidIndex: return "InvalidIndex";
    case ErrorCode::kNotSkew: return "NotSkew";
    case ErrorCode::kBoundExceeded: return "BoundExceeded";
    case ErrorCode::kNonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::kNotVolterra: return "NotVolterra";
    case ErrorCode::kNotStochastic: return "NotStochastic";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kSupportOverflow: return "SupportOverflow";
    case ErrorCode::kTrajectoryTooShort: return "TrajectoryTooShort";
    case ErrorCode::kBoundViolated: return "BoundViolated";
    case ErrorCode::kLimitNotInQ: return "LimitNotInQ";
    case ErrorCode::kFixViolation: return "FixViolation";
    case ErrorCode::kCyclingDetected: return "CyclingDetected";
    case ErrorCode::kBlockInfeasible: return "BlockInfeasible";
    case ErrorCode::kUnexpectedlyFeasible: return "UnexpectedlyFeasible";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace qvolterra
