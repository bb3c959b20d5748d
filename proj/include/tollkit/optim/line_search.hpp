#pragma once

#include <functional>

namespace tollkit::optim {

/// Minimizes a convex function on [lo, hi] given its (nondecreasing)
/// derivative, by bisection on the derivative's sign change. Returns an
/// endpoint when the derivative does not change sign.
double minimize_convex_by_derivative(const std::function<double(double)>& derivative, double lo,
                                     double hi, int max_iterations = 200);

/// Golden-section search for a unimodal function on [lo, hi].
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double tol = 1e-12, int max_iterations = 500);

/// Root of a continuous function with f(lo) and f(hi) of opposite sign.
double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-14,
                   int max_iterations = 500);

}  // namespace tollkit::optim
