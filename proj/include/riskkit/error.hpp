#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace riskkit {

enum class ErrorCode {
  InvalidArgument,
  EmptySample,
  ShapeMismatch,
  NoConvergence,
  EmptyTail,
  DegenerateDenominator,
  EmptyScenarioSet,
  InsufficientData,
  NotFound,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The code is the
/// machine-readable part; the message is for humans.
class RiskError : public std::runtime_error {
 public:
  RiskError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::EmptyTail: return "EmptyTail";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::EmptyScenarioSet: return "EmptyScenarioSet";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw RiskError(code, message);
}

}  // namespace riskkit
