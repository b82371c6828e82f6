#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wvarent {

enum class ErrorCode {
  OutOfSupport,
  DegenerateParameter,
  TailUnderflow,
  NonfiniteMoment,
  NonConvergence,
  NonFiniteIntegrand,
  UnsupportedFamily,
  InvalidModel,
  DegenerateProbability,
  EtaSingularity,
  BranchMismatch,
  InvalidStructure,
  QuantileSingularity,
  RatioSingularity,
  EmptySample,
  NonPositiveBandwidth,
  EmptyStudy,
  ParseError,
  ValidationError,
  UsageError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status and a stable error name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wvarent
