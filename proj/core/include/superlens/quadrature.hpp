#ifndef SUPERLENS_QUADRATURE_HPP
#define SUPERLENS_QUADRATURE_HPP

#include <complex>
#include <vector>

namespace superlens {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence.
QuadratureRule gauss_legendre(int n);

/// Composite Gauss-Legendre rule on [lo, hi]: `panels` equal subintervals
/// with `nodes_per_panel` Gauss points each.
QuadratureRule composite_gauss_legendre(double lo, double hi, int panels,
                                        int nodes_per_panel);

template <typename F>
auto integrate(const QuadratureRule& rule, F&& f) {
  using R = decltype(f(0.0));
  R acc{};
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    acc += rule.weights[k] * f(rule.nodes[k]);
  }
  return acc;
}

}  // namespace superlens

#endif  // SUPERLENS_QUADRATURE_HPP
