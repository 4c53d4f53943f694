#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nmcopula {

enum class ErrorCode {
  DimensionMismatch,
  InvalidParameter,
  NoDensity,
  ConvergenceFailure,
  DomainError,
  NonFiniteInput,
  IndexOutOfRange,
  EmptyAfterTrim,
  DegenerateLikelihood,
  NonFiniteLikelihood,
  PreconditionViolated,
  FileNotFound,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers branch on code().
class CopulaError : public std::runtime_error {
 public:
  CopulaError(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace nmcopula
