#include "irrev/error.hpp"

namespace irrev {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteSample: return "NonFiniteSample";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TiedPatternUnsupported: return "TiedPatternUnsupported";
    case ErrorCode::InvalidPattern: return "InvalidPattern";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DegenerateSeries: return "DegenerateSeries";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DivergedOrbit: return "DivergedOrbit";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace irrev
