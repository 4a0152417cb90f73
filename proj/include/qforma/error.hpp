#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qforma {

enum class ErrorKind {
  EmptySequence,
  ConfigError,
  WateringNotApplicable,
  UnknownPlot,
  NoPeers,
  SelfGreeting,
  DimensionError,
  NoCandidates,
  TooManyAgents,
  NormalizationError,
  SampleTooSmall,
  BackendError,
  BackendStartup,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qforma
