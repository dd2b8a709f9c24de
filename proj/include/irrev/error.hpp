#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace irrev {

enum class ErrorCode {
  NonFiniteSample,
  LengthMismatch,
  TiedPatternUnsupported,
  InvalidPattern,
  ParseError,
  SeriesTooShort,
  DomainError,
  DegenerateSeries,
  TooShort,
  EmptyInput,
  DivergedOrbit,
  InvalidParams,
  EmptyFile,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace irrev
