#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lorenzflow {

enum class ErrorKind {
  InvalidArgument,
  NonInvertibleCdf,
  DegenerateCurvature,
  SideMismatch,
  GridMismatch,
  MomentDrift,
  StabilityViolation,
  PositivityLoss,
  ConvexityLoss,
  ConstraintViolation,
  NonConvergence,
  ConfigError,
  MissingInput,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::optional<double> time = std::nullopt);

  ErrorKind kind() const { return kind_; }
  // Simulation time at which a stepping error occurred, if any.
  std::optional<double> time() const { return time_; }

 private:
  ErrorKind kind_;
  std::optional<double> time_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace lorenzflow
