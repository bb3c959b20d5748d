#pragma once

// Reference computations written independently of the library code paths.

#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tollkit/network.hpp"

namespace oracle {

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int k = 0; k < 400 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++k) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct TwoArcs {
  double a1, b1, a2, b2;  // s_k(w) = a_k w + b_k
  double demand, beta;
  double toll1 = 0.0, toll2 = 0.0;
};

// Flow on arc 1 at the logit equilibrium: w1 = g / (1 + exp(beta (c1 - c2))).
inline double two_arc_equilibrium(const TwoArcs& p) {
  auto f = [&](double w1) {
    double c1 = p.a1 * w1 + p.b1 + p.toll1;
    double c2 = p.a2 * (p.demand - w1) + p.b2 + p.toll2;
    return w1 - p.demand / (1.0 + std::exp(p.beta * (c1 - c2)));
  };
  return bisect(f, 0.0, p.demand);
}

// Minimizer over w1 of w1 s1 + w2 s2 + (1/beta)(w1 ln w1 + w2 ln w2 - g ln g),
// as the root of its derivative.
inline double two_arc_social_optimum(const TwoArcs& p) {
  auto slope = [&](double w1) {
    double w2 = p.demand - w1;
    return 2.0 * p.a1 * w1 + p.b1 - 2.0 * p.a2 * w2 - p.b2 +
           (std::log(w1) - std::log(w2)) / p.beta;
  };
  return bisect(slope, 0.0, p.demand);
}

// Routes by plain recursion over out-arcs; arc indices.
inline void collect_routes(const tollkit::Network& net, tollkit::NodeIndex node,
                           std::vector<std::size_t>& prefix,
                           std::vector<std::vector<std::size_t>>& out) {
  if (node == net.destination()) {
    out.push_back(prefix);
    return;
  }
  for (std::size_t a = 0; a < net.num_arcs(); ++a) {
    if (net.arc(a).tail != node) continue;
    prefix.push_back(a);
    collect_routes(net, net.arc(a).head, prefix, out);
    prefix.pop_back();
  }
}

inline std::vector<std::vector<std::size_t>> brute_force_routes(const tollkit::Network& net) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> prefix;
  collect_routes(net, net.origin(), prefix, out);
  return out;
}

inline double brute_force_max_route(const tollkit::Network& net, const std::vector<double>& cost) {
  double best = -INFINITY;
  for (const auto& r : brute_force_routes(net)) {
    double c = 0.0;
    for (auto a : r) c += cost[a];
    best = std::max(best, c);
  }
  return best;
}

// min c.x subject to G x <= h and E x = e, by enumerating every basic solution.
struct DenseLp {
  Eigen::VectorXd c;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
  Eigen::MatrixXd E;
  Eigen::VectorXd e;
};

inline std::optional<double> vertex_enumeration(const DenseLp& lp, double tol = 1e-9) {
  const int n = static_cast<int>(lp.c.size());
  const int m_eq = static_cast<int>(lp.E.rows());
  const int m = static_cast<int>(lp.G.rows());
  const int k = n - m_eq;
  std::optional<double> best;
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  if (k > m) return best;
  while (true) {
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    for (int i = 0; i < m_eq; ++i) {
      A.row(i) = lp.E.row(i);
      b(i) = lp.e(i);
    }
    for (int i = 0; i < k; ++i) {
      A.row(m_eq + i) = lp.G.row(pick[i]);
      b(m_eq + i) = lp.h(pick[i]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rank() == n) {
      Eigen::VectorXd x = lu.solve(b);
      bool ok = ((lp.G * x - lp.h).array() <= tol).all();
      if (m_eq > 0) ok = ok && ((lp.E * x - lp.e).cwiseAbs().array() <= tol).all();
      if (ok) {
        double v = lp.c.dot(x);
        if (!best || v < *best) best = v;
      }
    }
    int i = k - 1;
    while (i >= 0 && pick[i] == m - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

// Minimizes f over a box by repeated grid refinement around the best feasible point.
inline double refine_grid_search(const std::function<std::optional<double>(const std::vector<double>&)>& f,
                                 std::vector<double> lo, std::vector<double> hi, int points = 21,
                                 int rounds = 30) {
  const std::size_t dim = lo.size();
  double best = INFINITY;
  std::vector<double> best_x(dim);
  for (int round = 0; round < rounds; ++round) {
    std::vector<int> idx(dim, 0);
    while (true) {
      std::vector<double> x(dim);
      for (std::size_t k = 0; k < dim; ++k)
        x[k] = lo[k] + (hi[k] - lo[k]) * idx[k] / (points - 1);
      if (auto v = f(x); v && *v < best) {
        best = *v;
        best_x = x;
      }
      std::size_t k = 0;
      while (k < dim && ++idx[k] == points) idx[k++] = 0;
      if (k == dim) break;
    }
    for (std::size_t k = 0; k < dim; ++k) {
      double half = (hi[k] - lo[k]) / (points - 1) * 2.0;
      lo[k] = best_x[k] - half;
      hi[k] = best_x[k] + half;
    }
  }
  return best;
}

}  // namespace oracle
