#pragma once

namespace tollkit {

enum class LatencyForm {
  Affine,
};

/// Per-arc latency s(w) = theta1 * w + theta0, with theta1 > 0 and theta0 > 0
/// so the latency is strictly increasing and strictly positive on w >= 0.
class LatencyFunction {
 public:
  /// Throws Error(InvalidArgument) unless both parameters are finite and positive.
  static LatencyFunction affine(double theta1, double theta0);

  LatencyForm form() const noexcept { return form_; }
  double theta1() const noexcept { return theta1_; }
  double theta0() const noexcept { return theta0_; }

  // Unchecked evaluations for inner loops; callers guarantee w >= 0.
  double value(double w) const noexcept { return theta1_ * w + theta0_; }
  double slope(double /*w*/) const noexcept { return theta1_; }

  friend bool operator==(const LatencyFunction&, const LatencyFunction&) = default;

 private:
  LatencyFunction(LatencyForm form, double theta1, double theta0)
      : form_(form), theta1_(theta1), theta0_(theta0) {}

  LatencyForm form_;
  double theta1_;
  double theta0_;
};

/// s(w). Throws Error(NegativeFlow) for w < 0.
double evaluate_latency(const LatencyFunction& f, double w);

/// ds/dw at w. Throws Error(NegativeFlow) for w < 0.
double latency_derivative(const LatencyFunction& f, double w);

/// s(w) + p. Throws Error(NegativeFlow) / Error(NegativeToll).
double travel_cost(const LatencyFunction& f, double w, double toll);

}  // namespace tollkit
