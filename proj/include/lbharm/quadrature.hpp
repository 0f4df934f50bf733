#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "lbharm/errors.hpp"

namespace lbharm {

/// Nodes and weights of a one-dimensional quadrature rule.
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  Eigen::Index size() const noexcept { return nodes.size(); }

  template <typename F>
  double apply(F&& f) const {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
QuadratureRule gauss_legendre(int n);

/// Gauss-Legendre with `nodes_per_panel` points on each [edges[k], edges[k+1]].
QuadratureRule panel_gauss_legendre(std::span<const double> edges, int nodes_per_panel);

/// Equal panels on [a, b].
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int nodes_per_panel);

/// Panel edges 0, w, w(1+q), ... growing geometrically by `ratio` until `end`
/// is reached; the last edge is clamped to `end`.
std::vector<double> geometric_edges(double first_width, double ratio, double end);

/// Double-exponential (tanh-sinh) quadrature on [a, b]. Endpoint algebraic
/// singularities are integrable without special handling because the nodes
/// cluster doubly exponentially toward a and b and f is never evaluated at
/// the endpoints themselves. The step is halved until two successive levels
/// agree to `rel_tol`.
template <typename F>
double tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-13, int max_level = 10) {
  if (!(b > a)) {
    if (a == b) return 0.0;
    throw DomainError("tanh_sinh: requires a <= b");
  }
  constexpr double kHalfPi = 1.5707963267948966;
  constexpr double kTauMax = 4.5;
  const double half = 0.5 * (b - a);

  // Contribution of the node pair at +-tau (or the centre when tau == 0).
  auto pair_sum = [&](double tau) {
    const double u = kHalfPi * std::sinh(tau);
    const double dudtau = kHalfPi * std::cosh(tau);
    // s = (1 - tanh u)/2 computed without cancellation.
    const double s = 1.0 / (1.0 + std::exp(2.0 * u));
    const double sech2 = 4.0 * s * (1.0 - s);
    const double w = half * sech2 * dudtau;
    if (tau == 0.0) return w * f(a + half);
    const double offset = (b - a) * s;
    if (offset == 0.0 || w == 0.0) return 0.0;
    return w * (f(a + offset) + f(b - offset));
  };

  double h = 1.0;
  double sum = pair_sum(0.0);
  for (double tau = h; tau <= kTauMax; tau += h) sum += pair_sum(tau);
  double estimate = h * sum;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    for (double tau = h; tau <= kTauMax; tau += 2.0 * h) sum += pair_sum(tau);
    const double next = h * sum;
    const double diff = std::fabs(next - estimate);
    estimate = next;
    if (level >= 3 && diff <= rel_tol * std::fabs(next)) break;
  }
  return estimate;
}

/// Golden-section search for the minimum of a unimodal function on [lo, hi].
template <typename F>
double golden_section_minimize(F&& f, double lo, double hi, double rel_tol = 1e-10) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (std::fabs(b - a) > rel_tol * (std::fabs(c) + std::fabs(d))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace lbharm
