#include "tollkit/optim/line_search.hpp"

#include <cmath>

#include "tollkit/error.hpp"

namespace tollkit::optim {

double minimize_convex_by_derivative(const std::function<double(double)>& derivative, double lo,
                                     double hi, int max_iterations) {
  if (!(lo <= hi)) throw Error(ErrorCode::InvalidArgument, "empty line-search interval");
  if (derivative(lo) >= 0.0) return lo;
  if (derivative(hi) <= 0.0) return hi;
  for (int i = 0; i < max_iterations; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (derivative(mid) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double tol, int max_iterations) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < max_iterations && b - a > tol; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                   int max_iterations) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw Error(ErrorCode::InvalidArgument, "bisect_root: no sign change on interval");
  for (int i = 0; i < max_iterations && hi - lo > tol; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace tollkit::optim
