#pragma once

#include "rspec/field.hpp"

namespace rspec {

inline constexpr int kDefaultChordNodes = 64;

/// Normalized transform value at a detector point: the average of g over the
/// chord with offset s and inclination phi, by Gauss-Legendre quadrature with
/// `nodes` points. At s == 1 the chord degenerates and the continuous limit
/// (the point value at the tangency point) is returned.
double radon_line_integral(const FieldFunction& g, const DetectorPoint& d,
                           int nodes = kDefaultChordNodes);

/// Diagonal action on coefficients: out(l,m) = c(l,m) / sqrt(m+1).
CoefficientField svd_forward(const CoefficientField& c);

/// Exact left inverse of svd_forward: out(l,m) = sqrt(m+1) * c(l,m).
CoefficientField svd_inverse(const CoefficientField& c);

}  // namespace rspec
