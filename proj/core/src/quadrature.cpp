#include "superlens/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace superlens {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n(x) = 0.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(double lo, double hi, int panels,
                                        int nodes_per_panel) {
  if (panels < 1) throw std::invalid_argument("composite rule: panels >= 1");
  const QuadratureRule base = gauss_legendre(nodes_per_panel);
  QuadratureRule rule;
  const double h = (hi - lo) / panels;
  for (int q = 0; q < panels; ++q) {
    const double mid = lo + (q + 0.5) * h;
    for (std::size_t k = 0; k < base.nodes.size(); ++k) {
      rule.nodes.push_back(mid + 0.5 * h * base.nodes[k]);
      rule.weights.push_back(0.5 * h * base.weights[k]);
    }
  }
  return rule;
}

}  // namespace superlens
