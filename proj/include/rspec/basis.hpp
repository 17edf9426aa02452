#pragma once

#include <Eigen/Core>
#include <span>

#include "rspec/types.hpp"

namespace rspec {

/// Immutable table of radial-polynomial monomial coefficients.
///
/// The coefficients of R_m^{|l|} are integers; they are computed exactly
/// (products of two binomials, accumulated in 128-bit integers) and converted
/// to double once. Evaluation is a Horner sweep in u = r^2 scaled by r^{|l|},
/// which keeps the alternating sum stable over the supported degree range.
class RadialTable {
 public:
  explicit RadialTable(int degree_cap);

  int degree_cap() const { return cap_; }

  /// R_m^{|l|}(r). Requires (l, m) admissible and m <= degree_cap.
  double evaluate(int l, int m, double r) const;

  /// Monomial coefficients of R_m^{|l|}, highest power (r^m) first.
  std::span<const double> coefficients(int l, int m) const;

  /// Shared instance with the default degree cap.
  static const RadialTable& standard();

 private:
  int cap_;
  std::vector<double> coeff_;          // packed coefficient blocks
  std::vector<std::size_t> offset_;    // block start per (m, |l|)
  std::size_t block_index(int abs_l, int m) const;
};

/// Radial polynomial R_m^{|l|}(r) on [0,1].
double radial_poly(const BasisIndex& idx, double r);

/// k-th derivative of R_m^{|l|} at r, computed by recursive application of
/// the lower-degree expansion of d/dr R_m^{|l|} (never by differentiating the
/// monomial form).
double radial_poly_derivative(const BasisIndex& idx, int order, double r);

/// Maximum derivative order accepted by the recurrence-based evaluators.
inline constexpr int kMaxDerivativeOrder = 4;

/// Chebyshev polynomial of the second kind, three-term recurrence.
template <class Scalar>
Scalar chebyshev_U(int m, Scalar s) {
  if (m < 0) return Scalar(0);
  Scalar prev = Scalar(1);
  if (m == 0) return prev;
  Scalar cur = Scalar(2) * s;
  for (int k = 1; k < m; ++k) {
    Scalar next = Scalar(2) * s * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Chebyshev polynomial of the first kind.
template <class Scalar>
Scalar chebyshev_T(int m, Scalar s) {
  if (m < 0) return chebyshev_T(-m, s);
  Scalar prev = Scalar(1);
  if (m == 0) return prev;
  Scalar cur = s;
  for (int k = 1; k < m; ++k) {
    Scalar next = Scalar(2) * s * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// k-th derivative of U_m via the first-kind expansion
///   U_m'(s) = sum_{j < m, m-j odd} c_j T_j(s),
///   c_j = (m+1)^2 - j^2, with the j = 0 term halved,
/// combined with T_j'(s) = j U_{j-1}(s).
double chebyshev_U_derivative(int m, int order, double s);

/// k-th derivative of T_m (same identity pair, exposed for reuse in tests).
double chebyshev_T_derivative(int m, int order, double s);

/// Disc basis function sqrt(m+1) R_m^{|l|}(r) exp(i l theta).
Complex zernike_phi(const BasisIndex& idx, const BrainPoint& p);

/// Detector basis function U_m(s) exp(i l phi).
Complex psi(const BasisIndex& idx, const DetectorPoint& d);

/// Total-function variants: zero for inadmissible (l, m).
Complex zernike_phi_total(int l, int m, const BrainPoint& p);
Complex psi_total(int l, int m, const DetectorPoint& d);

/// Dense evaluation of the disc basis: row k holds phi_idx at (r[k], theta[k]).
Eigen::MatrixXcd zernike_matrix(const Eigen::Ref<const Eigen::VectorXd>& r,
                                const Eigen::Ref<const Eigen::VectorXd>& theta,
                                std::span<const BasisIndex> indices);

/// Dense evaluation of the detector basis: row k holds psi_idx at (s[k], phi[k]).
Eigen::MatrixXcd psi_matrix(const Eigen::Ref<const Eigen::VectorXd>& s,
                            const Eigen::Ref<const Eigen::VectorXd>& phi,
                            std::span<const BasisIndex> indices);

}  // namespace rspec
