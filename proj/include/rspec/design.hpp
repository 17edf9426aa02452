#pragma once

#include <Eigen/Core>
#include <memory>

#include "rspec/types.hpp"

namespace rspec {

/// One detector-space cell [s_lo, s_hi] x [phi_lo, phi_hi].
struct GridCell {
  int k1 = 0;
  int k2 = 0;
  double s_lo = 0.0, s_hi = 0.0;
  double phi_lo = 0.0, phi_hi = 0.0;
};

/// Antiderivative of sqrt(1-s^2): (s sqrt(1-s^2) + asin s) / 2.
double circle_mass_antiderivative(double s);

/// Radial design point of a cell: the s-average of the cell under the
/// sqrt(1-s^2) weight, i.e. the unique z with
/// integral over [s_lo, s_hi] of (s - z) sqrt(1-s^2) ds equal to zero.
/// Closed form; the solution is strictly interior to the cell.
double radial_design_point(double s_lo, double s_hi);

/// Measure of a cell under the detector-space law
/// (2/pi^2) sqrt(1-s^2) ds dphi, in closed form.
double cell_weight(const GridCell& cell);

/// The q x p detector grid: q radial columns, p angular rows, n = p*q design
/// points. Row-major layout, linear index k = k1*p + k2. Immutable once built.
class DesignGrid {
 public:
  /// p = round(ratio * q), clamped to >= 1. The default ratio 2*pi gives the
  /// resolution-matched angular count.
  static DesignGrid build(int q, double ratio = kTwoPi);
  static DesignGrid build_pq(int q, int p);

  int q() const { return q_; }
  int p() const { return p_; }
  Eigen::Index n() const { return static_cast<Eigen::Index>(q_) * p_; }

  Eigen::Index linear_index(int k1, int k2) const {
    return static_cast<Eigen::Index>(k1) * p_ + k2;
  }

  DetectorPoint point(Eigen::Index k) const { return {s_[k], phi_[k]}; }
  double weight(Eigen::Index k) const { return w_[k]; }
  GridCell cell(int k1, int k2) const;
  GridCell cell(Eigen::Index k) const {
    return cell(static_cast<int>(k / p_), static_cast<int>(k % p_));
  }

  /// Per-point coordinate and weight vectors, aligned with the linear index.
  const Eigen::VectorXd& s() const { return s_; }
  const Eigen::VectorXd& phi() const { return phi_; }
  const Eigen::VectorXd& weights() const { return w_; }

  /// Radial design points / per-cell weights of one column (shared by rows).
  const Eigen::VectorXd& column_points() const { return s_col_; }
  const Eigen::VectorXd& column_weights() const { return w_col_; }
  const Eigen::VectorXd& row_angles() const { return phi_row_; }

 private:
  DesignGrid() = default;
  int q_ = 0, p_ = 0;
  Eigen::VectorXd s_col_, w_col_, phi_row_;
  Eigen::VectorXd s_, phi_, w_;
};

using DesignGridPtr = std::shared_ptr<const DesignGrid>;

inline DesignGridPtr make_grid(int q, double ratio = kTwoPi) {
  return std::make_shared<const DesignGrid>(DesignGrid::build(q, ratio));
}

}  // namespace rspec
