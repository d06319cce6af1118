#pragma once

#include <stdexcept>
#include <string>

namespace trajan {

enum class ErrorCode {
  // geometry
  InsufficientCorrespondences,
  DegeneratePair,
  NonPositiveK,
  NoConvergence,
  // ingest
  MalformedRecord,
  NonMonotonicFrame,
  InvalidBox,
  // tracking
  OutOfOrderFrame,
  // routes
  RankDeficient,
  NonMonotonic,
  // anomaly
  TooFewPoints,
  NoAdequateDegree,
  MissingBaseline,
  TooFewSamples,
  // simulator
  InvalidScript,
  ScriptHasIncidents,
  // tooling
  ConfigError,
  IoError,
};

const char* to_string(ErrorCode code);

/// Whether an error class indicates bad configuration/usage rather than bad
/// input data. The CLI maps the former to exit code 2, the latter to 3.
bool is_config_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace trajan
