#include "trajan/errors.hpp"

namespace trajan {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InsufficientCorrespondences: return "InsufficientCorrespondences";
    case ErrorCode::DegeneratePair: return "DegeneratePair";
    case ErrorCode::NonPositiveK: return "NonPositiveK";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::NonMonotonicFrame: return "NonMonotonicFrame";
    case ErrorCode::InvalidBox: return "InvalidBox";
    case ErrorCode::OutOfOrderFrame: return "OutOfOrderFrame";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NonMonotonic: return "NonMonotonic";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NoAdequateDegree: return "NoAdequateDegree";
    case ErrorCode::MissingBaseline: return "MissingBaseline";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::InvalidScript: return "InvalidScript";
    case ErrorCode::ScriptHasIncidents: return "ScriptHasIncidents";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

bool is_config_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::IoError:
    case ErrorCode::InvalidScript:
    case ErrorCode::ScriptHasIncidents:
    case ErrorCode::MissingBaseline:
    case ErrorCode::NoAdequateDegree:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace trajan
