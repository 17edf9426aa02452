#include "rspec/radon.hpp"

#include <cmath>

#include "rspec/quadrature.hpp"

namespace rspec {

double radon_line_integral(const FieldFunction& g, const DetectorPoint& d, int nodes) {
  if (!(d.s >= 0.0 && d.s <= 1.0))
    throw std::domain_error("radon_line_integral: offset s must lie in [0, 1]");
  if (nodes < 2) throw UsageError("radon_line_integral: need at least 2 nodes");

  const double c = std::cos(d.phi);
  const double sn = std::sin(d.phi);
  // Chord half-length; folding it into the parametrization keeps the average
  // well defined as s -> 1 (no isolated (1-s^2)^{-1/2} factor is ever formed).
  const double half_len = std::sqrt(std::max(0.0, 1.0 - d.s * d.s));

  const auto& rule = gauss_legendre(nodes);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    const double t = half_len * rule.nodes[i];
    const double x = d.s * c - t * sn;
    const double y = d.s * sn + t * c;
    double r = std::hypot(x, y);
    if (r > 1.0) r = 1.0;  // chord endpoints may overshoot by roundoff
    const double theta = std::atan2(y, x);
    acc += rule.weights[i] * g.eval({r, theta < 0.0 ? theta + kTwoPi : theta});
  }
  return 0.5 * acc;
}

CoefficientField svd_forward(const CoefficientField& c) {
  require_tag(c, SpaceTag::brain, "svd_forward");
  CoefficientField out(SpaceTag::detector);
  for (const auto& [idx, v] : c)
    out.set(idx, v / std::sqrt(static_cast<double>(idx.m + 1)));
  return out;
}

CoefficientField svd_inverse(const CoefficientField& c) {
  require_tag(c, SpaceTag::detector, "svd_inverse");
  CoefficientField out(SpaceTag::brain);
  for (const auto& [idx, v] : c)
    out.set(idx, v * std::sqrt(static_cast<double>(idx.m + 1)));
  return out;
}

}  // namespace rspec
