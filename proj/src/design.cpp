#include "rspec/design.hpp"

#include <cmath>

namespace rspec {

double circle_mass_antiderivative(double s) {
  return 0.5 * (s * std::sqrt(std::max(0.0, 1.0 - s * s)) + std::asin(s));
}

namespace {

// Antiderivative of s*sqrt(1-s^2): -(1-s^2)^{3/2} / 3.
double first_moment_antiderivative(double s) {
  const double c = std::max(0.0, 1.0 - s * s);
  return -std::sqrt(c) * c / 3.0;
}

}  // namespace

double radial_design_point(double s_lo, double s_hi) {
  if (!(0.0 <= s_lo && s_lo < s_hi && s_hi <= 1.0))
    throw std::domain_error("radial_design_point: need 0 <= s_lo < s_hi <= 1");
  const double num = first_moment_antiderivative(s_hi) - first_moment_antiderivative(s_lo);
  const double den = circle_mass_antiderivative(s_hi) - circle_mass_antiderivative(s_lo);
  return num / den;
}

double cell_weight(const GridCell& cell) {
  if (!(cell.s_lo < cell.s_hi && cell.phi_lo < cell.phi_hi))
    throw std::domain_error("cell_weight: degenerate cell");
  const double radial =
      circle_mass_antiderivative(cell.s_hi) - circle_mass_antiderivative(cell.s_lo);
  return (2.0 / (kPi * kPi)) * (cell.phi_hi - cell.phi_lo) * radial;
}

GridCell DesignGrid::cell(int k1, int k2) const {
  if (k1 < 0 || k1 >= q_ || k2 < 0 || k2 >= p_)
    throw UsageError("DesignGrid::cell: index out of range");
  return {k1,
          k2,
          static_cast<double>(k1) / q_,
          static_cast<double>(k1 + 1) / q_,
          kTwoPi * k2 / p_,
          kTwoPi * (k2 + 1) / p_};
}

DesignGrid DesignGrid::build(int q, double ratio) {
  if (q < 1) throw UsageError("DesignGrid: q must be positive");
  if (!(ratio > 0.0)) throw UsageError("DesignGrid: ratio must be positive");
  const int p = std::max(1, static_cast<int>(std::lround(ratio * q)));
  return build_pq(q, p);
}

DesignGrid DesignGrid::build_pq(int q, int p) {
  if (q < 1 || p < 1) throw UsageError("DesignGrid: q and p must be positive");
  DesignGrid g;
  g.q_ = q;
  g.p_ = p;
  g.s_col_.resize(q);
  g.w_col_.resize(q);
  g.phi_row_.resize(p);

  const double dphi = kTwoPi / p;
  for (int k1 = 0; k1 < q; ++k1) {
    const double lo = static_cast<double>(k1) / q;
    const double hi = static_cast<double>(k1 + 1) / q;
    g.s_col_[k1] = radial_design_point(lo, hi);
    g.w_col_[k1] = (2.0 / (kPi * kPi)) * dphi *
                   (circle_mass_antiderivative(hi) - circle_mass_antiderivative(lo));
  }
  for (int k2 = 0; k2 < p; ++k2) g.phi_row_[k2] = kTwoPi * (k2 + 0.5) / p;

  const Eigen::Index n = g.n();
  g.s_.resize(n);
  g.phi_.resize(n);
  g.w_.resize(n);
  for (int k1 = 0; k1 < q; ++k1)
    for (int k2 = 0; k2 < p; ++k2) {
      const Eigen::Index k = g.linear_index(k1, k2);
      g.s_[k] = g.s_col_[k1];
      g.phi_[k] = g.phi_row_[k2];
      g.w_[k] = g.w_col_[k1];
    }
  return g;
}

}  // namespace rspec
