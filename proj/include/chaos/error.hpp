#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chaos {

enum class ErrorCode {
  InvalidArgument,
  InvalidSparseIndex,
  CoordinateNotPositive,
  EmptyIndex,
  OutOfDomain,
  OrderTooLarge,
  DimensionMismatch,
  StepSizeUnderflow,
  MaxStepsExceeded,
  NotGbm,
  NotBm,
  TimeNotOnGrid,
  NonPositiveValue,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures of the numerics rather than of the inputs.
  bool is_numerical() const noexcept {
    return code_ == ErrorCode::StepSizeUnderflow ||
           code_ == ErrorCode::MaxStepsExceeded;
  }

 private:
  ErrorCode code_;
};

}  // namespace chaos
