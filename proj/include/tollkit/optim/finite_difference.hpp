#pragma once

#include <functional>
#include <vector>

namespace tollkit::optim {

/// Central-difference gradient. Intended as a test oracle.
std::vector<double> finite_difference_gradient(
    const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& x,
    double h = 1e-5);

}  // namespace tollkit::optim
