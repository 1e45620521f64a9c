#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kschur {

enum class ErrorCode {
  NotSquare,
  NotHermitian,
  NonFinite,
  ZeroMatrix,
  NoConvergence,
  IndexOutOfRange,
  SwapIllConditioned,
  DimensionMismatch,
  RankCollapse,
  ObservableMismatch,
  SingularSystem,
  NonPositiveWeight,
  PairSplit,
  TooFewSnapshots,
  DiagonalizationFailure,
  BadParams,
  InsufficientData,
  IoError,
  ParseError,
};

// Data errors stem from malformed or inadequate input; numerical errors from
// an algorithm failing on otherwise well-formed input.
enum class ErrorCategory { Data, Numerical };

std::string_view to_string(ErrorCode code) noexcept;
ErrorCategory category_of(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

// Raised by reorder_schur; carries the diagonal positions (0-based, at the
// time of the failed swap) of the two blocks that could not be exchanged.
class SwapError : public Error {
 public:
  SwapError(std::ptrdiff_t first, std::ptrdiff_t second, const std::string& detail);

  std::ptrdiff_t first() const noexcept { return first_; }
  std::ptrdiff_t second() const noexcept { return second_; }

 private:
  std::ptrdiff_t first_;
  std::ptrdiff_t second_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace kschur
