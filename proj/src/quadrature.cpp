#include "lbharm/quadrature.hpp"

#include <numbers>
#include <utility>

namespace lbharm {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: need at least one node");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
    return rule;
  }
  // Legendre P_n and its derivative at x.
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule panel_gauss_legendre(std::span<const double> edges, int nodes_per_panel) {
  if (edges.size() < 2) throw ConfigError("panel_gauss_legendre: need at least two edges");
  const QuadratureRule ref = gauss_legendre(nodes_per_panel);
  const Eigen::Index panels = static_cast<Eigen::Index>(edges.size()) - 1;
  QuadratureRule rule;
  rule.nodes.resize(panels * nodes_per_panel);
  rule.weights.resize(panels * nodes_per_panel);
  for (Eigen::Index p = 0; p < panels; ++p) {
    const double a = edges[p], b = edges[p + 1];
    if (!(b > a)) throw ConfigError("panel_gauss_legendre: edges must increase");
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    rule.nodes.segment(p * nodes_per_panel, nodes_per_panel) =
        (mid + half * ref.nodes.array()).matrix();
    rule.weights.segment(p * nodes_per_panel, nodes_per_panel) = half * ref.weights;
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(double a, double b, int panels, int nodes_per_panel) {
  if (panels < 1) throw ConfigError("composite_gauss_legendre: need at least one panel");
  if (!(b > a)) throw ConfigError("composite_gauss_legendre: empty interval");
  std::vector<double> edges(panels + 1);
  for (int p = 0; p <= panels; ++p) edges[p] = a + (b - a) * p / panels;
  edges.back() = b;
  return panel_gauss_legendre(edges, nodes_per_panel);
}

std::vector<double> geometric_edges(double first_width, double ratio, double end) {
  if (!(first_width > 0.0) || !(ratio >= 1.0) || !(end > 0.0)) {
    throw ConfigError("geometric_edges: invalid parameters");
  }
  std::vector<double> edges{0.0};
  double width = first_width;
  while (edges.back() + width < end * (1.0 - 1e-12)) {
    edges.push_back(edges.back() + width);
    width *= ratio;
  }
  edges.push_back(end);
  return edges;
}

}  // namespace lbharm
