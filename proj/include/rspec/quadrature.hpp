#pragma once

#include <Eigen/Core>

namespace rspec {

/// Gauss-Legendre rule on [-1, 1]: nodes.size() == weights.size() == n,
/// nodes ascending, weights summing to 2.
struct GaussLegendreRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Nodes and weights for an n-point rule (Newton iteration on P_n, cached).
const GaussLegendreRule& gauss_legendre(int n);

/// Integrate f over [a, b] with an n-point rule.
template <class F>
double integrate(F&& f, double a, double b, int n) {
  const auto& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + hw * rule.nodes[i]);
  return acc * hw;
}

}  // namespace rspec
