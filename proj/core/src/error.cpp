#include "wvarent/error.hpp"

namespace wvarent {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::OutOfSupport: return "OutOfSupport";
    case ErrorCode::DegenerateParameter: return "DegenerateParameter";
    case ErrorCode::TailUnderflow: return "TailUnderflow";
    case ErrorCode::NonfiniteMoment: return "NonfiniteMoment";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::DegenerateProbability: return "DegenerateProbability";
    case ErrorCode::EtaSingularity: return "EtaSingularity";
    case ErrorCode::BranchMismatch: return "BranchMismatch";
    case ErrorCode::InvalidStructure: return "InvalidStructure";
    case ErrorCode::QuantileSingularity: return "QuantileSingularity";
    case ErrorCode::RatioSingularity: return "RatioSingularity";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::NonPositiveBandwidth: return "NonPositiveBandwidth";
    case ErrorCode::EmptyStudy: return "EmptyStudy";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace wvarent
