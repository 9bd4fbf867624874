#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vortex {

enum class ErrorCode {
  NonFiniteInput,
  GridMismatch,
  InvalidGrid,
  NonZeroMean,
  BadExponent,
  ScaleTooCoarse,
  UnresolvedKernel,
  CFLViolation,
  BlowupDetected,
  TrajectoryGap,
  AlphaOutOfRange,
  NonZeroMeanForcing,
  TimeMisalignment,
  MissingTrajectory,
  BadFile,
  BadConfig,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::NonZeroMean: return "NonZeroMean";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::ScaleTooCoarse: return "ScaleTooCoarse";
    case ErrorCode::UnresolvedKernel: return "UnresolvedKernel";
    case ErrorCode::CFLViolation: return "CFLViolation";
    case ErrorCode::BlowupDetected: return "BlowupDetected";
    case ErrorCode::TrajectoryGap: return "TrajectoryGap";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::NonZeroMeanForcing: return "NonZeroMeanForcing";
    case ErrorCode::TimeMisalignment: return "TimeMisalignment";
    case ErrorCode::MissingTrajectory: return "MissingTrajectory";
    case ErrorCode::BadFile: return "BadFile";
    case ErrorCode::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Non-fatal conditions (e.g. a Gaussian kernel too narrow for the grid).
/// Printed to stderr and kept so that a run can record them.
void warn(const std::string& message);
std::vector<std::string> take_warnings();

}  // namespace vortex
