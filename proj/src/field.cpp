#include "rspec/field.hpp"

#include <cmath>

#include "rspec/basis.hpp"

namespace rspec {
namespace {

double field_scale(const CoefficientField& c) {
  double scale = 0.0;
  for (const auto& [idx, v] : c) scale = std::max(scale, std::abs(v));
  return scale > 0.0 ? scale : 1.0;
}

double clamp_real(Complex value, const CoefficientField& c) {
  if (std::abs(value.imag()) > 1e-12 * field_scale(c))
    throw ConsistencyError("expansion is not real: imaginary residue " +
                           std::to_string(value.imag()));
  return value.real();
}

}  // namespace

bool CoefficientField::is_conjugate_symmetric(double tol) const {
  for (const auto& [idx, v] : entries_) {
    const Complex mirror = get({-idx.l, idx.m});
    if (std::abs(mirror - std::conj(v)) > tol * std::max(1.0, std::abs(v)))
      return false;
  }
  return true;
}

Complex evaluate_expansion(const CoefficientField& c, const BrainPoint& p) {
  require_tag(c, SpaceTag::brain, "evaluate_expansion");
  Complex acc{0.0, 0.0};
  for (const auto& [idx, v] : c) acc += v * zernike_phi(idx, p);
  return acc;
}

Complex evaluate_expansion(const CoefficientField& c, const DetectorPoint& d) {
  require_tag(c, SpaceTag::detector, "evaluate_expansion");
  Complex acc{0.0, 0.0};
  for (const auto& [idx, v] : c) acc += v * psi(idx, d);
  return acc;
}

double evaluate_expansion_real(const CoefficientField& c, const BrainPoint& p) {
  return clamp_real(evaluate_expansion(c, p), c);
}

double evaluate_expansion_real(const CoefficientField& c, const DetectorPoint& d) {
  return clamp_real(evaluate_expansion(c, d), c);
}

Complex expansion_derivative(const CoefficientField& c, int alpha, int beta,
                             const BrainPoint& p) {
  require_tag(c, SpaceTag::brain, "expansion_derivative");
  if (alpha < 0 || beta < 0) throw UsageError("derivative orders must be nonnegative");
  if (alpha + beta > kMaxDerivativeOrder)
    throw CapabilityError("expansion_derivative: order above the supported cap");
  Complex acc{0.0, 0.0};
  for (const auto& [idx, v] : c) {
    const double radial = alpha == 0 ? radial_poly(idx, p.r)
                                     : radial_poly_derivative(idx, alpha, p.r);
    // Each theta-derivative multiplies the angular factor by (i l).
    const Complex angular = std::pow(Complex{0.0, static_cast<double>(idx.l)}, beta) *
                            std::polar(1.0, idx.l * p.theta);
    acc += v * std::sqrt(static_cast<double>(idx.m + 1)) * radial * angular;
  }
  return acc;
}

FieldFunction field_from_coefficients(CoefficientField c) {
  require_tag(c, SpaceTag::brain, "field_from_coefficients");
  FieldFunction f;
  f.coefficients = std::move(c);
  f.eval = [field = *f.coefficients](const BrainPoint& p) {
    return evaluate_expansion_real(field, p);
  };
  return f;
}

}  // namespace rspec
