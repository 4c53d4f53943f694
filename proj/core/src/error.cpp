#include "nmcopula/error.hpp"

namespace nmcopula {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NoDensity: return "NoDensity";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyAfterTrim: return "EmptyAfterTrim";
    case ErrorCode::DegenerateLikelihood: return "DegenerateLikelihood";
    case ErrorCode::NonFiniteLikelihood: return "NonFiniteLikelihood";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

CopulaError::CopulaError(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

void raise(ErrorCode code, const std::string& message) {
  throw CopulaError(code, message);
}

}  // namespace nmcopula
