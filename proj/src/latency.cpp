#include "tollkit/latency.hpp"

#include <cmath>
#include <sstream>

#include "tollkit/error.hpp"

namespace tollkit {

LatencyFunction LatencyFunction::affine(double theta1, double theta0) {
  if (!std::isfinite(theta1) || !std::isfinite(theta0) || theta1 <= 0.0 || theta0 <= 0.0) {
    std::ostringstream os;
    os << "affine latency needs theta1 > 0 and theta0 > 0, got (" << theta1 << ", " << theta0
       << ")";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  return LatencyFunction(LatencyForm::Affine, theta1, theta0);
}

namespace {
void require_nonnegative_flow(double w) {
  if (!(w >= 0.0)) {
    std::ostringstream os;
    os << "flow must be nonnegative, got " << w;
    throw Error(ErrorCode::NegativeFlow, os.str());
  }
}
}  // namespace

double evaluate_latency(const LatencyFunction& f, double w) {
  require_nonnegative_flow(w);
  return f.value(w);
}

double latency_derivative(const LatencyFunction& f, double w) {
  require_nonnegative_flow(w);
  return f.slope(w);
}

double travel_cost(const LatencyFunction& f, double w, double toll) {
  require_nonnegative_flow(w);
  if (!(toll >= 0.0)) {
    std::ostringstream os;
    os << "toll must be nonnegative, got " << toll;
    throw Error(ErrorCode::NegativeToll, os.str());
  }
  return f.value(w) + toll;
}

}  // namespace tollkit
