#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tollkit {

enum class ErrorCode {
  CycleDetected,
  UnreachableArc,
  DuplicateArcId,
  NegativeDemand,
  InvalidNetwork,
  RouteCapExceeded,
  DimensionMismatch,
  ParseError,
  NegativeFlow,
  NegativeToll,
  InvalidArgument,
  NonFiniteCost,
  InfeasibleFlow,
  NoConvergence,
  Infeasible,
  MaxIterations,
  NoInteriorPoint,
  Io,
};

std::string_view to_string(ErrorCode code);

// Input-side failures (bad files, invalid networks, bad arguments) are kept
// apart from numerical failures so the CLI can map them to distinct exit codes.
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, int iterations, double residual);

  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

}  // namespace tollkit
