#include "kschur/error.hpp"

namespace kschur {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::SwapIllConditioned: return "SwapIllConditioned";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RankCollapse: return "RankCollapse";
    case ErrorCode::ObservableMismatch: return "ObservableMismatch";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::PairSplit: return "PairSplit";
    case ErrorCode::TooFewSnapshots: return "TooFewSnapshots";
    case ErrorCode::DiagonalizationFailure: return "DiagonalizationFailure";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotSquare:
    case ErrorCode::NotHermitian:
    case ErrorCode::NonFinite:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::ObservableMismatch:
    case ErrorCode::NonPositiveWeight:
    case ErrorCode::PairSplit:
    case ErrorCode::TooFewSnapshots:
    case ErrorCode::BadParams:
    case ErrorCode::InsufficientData:
    case ErrorCode::IoError:
    case ErrorCode::ParseError:
      return ErrorCategory::Data;
    default:
      return ErrorCategory::Numerical;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

SwapError::SwapError(std::ptrdiff_t first, std::ptrdiff_t second, const std::string& detail)
    : Error(ErrorCode::SwapIllConditioned,
            "cannot swap diagonal blocks at positions " + std::to_string(first + 1) + " and " +
                std::to_string(second + 1) + " (" + detail + ")"),
      first_(first),
      second_(second) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace kschur
