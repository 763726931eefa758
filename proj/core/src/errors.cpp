#include "utm/errors.hpp"

namespace utm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Evaluation: return "EvaluationError";
    case ErrorKind::ContourRadius: return "ContourRadiusError";
    case ErrorKind::Dissipativity: return "DissipativityError";
    case ErrorKind::Stiffness: return "StiffnessError";
    case ErrorKind::Truncation: return "TruncationError";
    case ErrorKind::Quadrature: return "QuadratureError";
    case ErrorKind::BoundaryRank: return "BoundaryRankError";
    case ErrorKind::Case: return "CaseError";
    case ErrorKind::Coverage: return "CoverageError";
    case ErrorKind::Argument: return "ArgumentError";
    case ErrorKind::Stability: return "StabilityError";
    case ErrorKind::Budget: return "BudgetError";
    case ErrorKind::RootIsolation: return "RootIsolationError";
    case ErrorKind::Oracle: return "OracleError";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

void raise(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace utm
