#include "lorenzflow/errors.hpp"

namespace lorenzflow {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonInvertibleCdf: return "NonInvertibleCdf";
    case ErrorKind::DegenerateCurvature: return "DegenerateCurvature";
    case ErrorKind::SideMismatch: return "SideMismatch";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::MomentDrift: return "MomentDrift";
    case ErrorKind::StabilityViolation: return "StabilityViolation";
    case ErrorKind::PositivityLoss: return "PositivityLoss";
    case ErrorKind::ConvexityLoss: return "ConvexityLoss";
    case ErrorKind::ConstraintViolation: return "ConstraintViolation";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::MissingInput: return "MissingInput";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<double> time)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), time_(time) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace lorenzflow
