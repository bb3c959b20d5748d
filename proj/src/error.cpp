#include "tollkit/error.hpp"

#include <sstream>

namespace tollkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::UnreachableArc: return "UnreachableArc";
    case ErrorCode::DuplicateArcId: return "DuplicateArcId";
    case ErrorCode::NegativeDemand: return "NegativeDemand";
    case ErrorCode::InvalidNetwork: return "InvalidNetwork";
    case ErrorCode::RouteCapExceeded: return "RouteCapExceeded";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NegativeFlow: return "NegativeFlow";
    case ErrorCode::NegativeToll: return "NegativeToll";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFiniteCost: return "NonFiniteCost";
    case ErrorCode::InfeasibleFlow: return "InfeasibleFlow";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::NoInteriorPoint: return "NoInteriorPoint";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::CycleDetected:
    case ErrorCode::UnreachableArc:
    case ErrorCode::DuplicateArcId:
    case ErrorCode::NegativeDemand:
    case ErrorCode::InvalidNetwork:
    case ErrorCode::RouteCapExceeded:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::ParseError:
    case ErrorCode::NegativeFlow:
    case ErrorCode::NegativeToll:
    case ErrorCode::InvalidArgument:
    case ErrorCode::Io:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

namespace {
std::string convergence_message(const std::string& what, int iterations, double residual) {
  std::ostringstream os;
  os << what << " after " << iterations << " iterations (last residual " << residual << ")";
  return os.str();
}
}  // namespace

NoConvergenceError::NoConvergenceError(const std::string& what, int iterations, double residual)
    : Error(ErrorCode::NoConvergence, convergence_message(what, iterations, residual)),
      iterations_(iterations),
      residual_(residual) {}

}  // namespace tollkit
