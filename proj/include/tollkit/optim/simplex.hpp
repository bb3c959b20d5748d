#pragma once

#include "tollkit/optim/linear_program.hpp"

namespace tollkit::optim {

struct SimplexOptions {
  double tolerance = 1e-9;
  int max_iterations = 50'000;
};

/// Two-phase dense tableau simplex with Bland's rule. Deterministic: the same
/// program always yields the same pivot sequence and vertex.
SolveReport simplex_solve(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace tollkit::optim
