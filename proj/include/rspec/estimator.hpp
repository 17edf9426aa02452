#pragma once

#include <span>

#include "rspec/design.hpp"
#include "rspec/field.hpp"

namespace rspec {

/// Bandwidth rule t(n) = max(1, floor(scale * (n / log n)^{1/(2(v+3))})),
/// clamped to the degree cap. v is the smoothness index of the target class.
struct BandwidthRule {
  double v = 5.0;
  double scale = 1.0;
};

int default_bandwidth(Eigen::Index n, const BandwidthRule& rule);

/// Frequency filter Lambda: [0, inf) -> [0, 1] with compact support.
/// The estimator keeps sqrt(m+1) * Lambda(m/t) * R_hat(l, m).
struct FilterSpec {
  enum class Kind { hard_cutoff, smooth };

  Kind kind = Kind::hard_cutoff;
  std::function<double(double)> lambda;  // unset for the hard cutoff
  double support_end = 1.0;              // Lambda vanishes beyond this point

  static FilterSpec hard() { return {}; }
  /// Default taper: 1 on [0, 1/2], linear to 0 at 1.
  static FilterSpec smooth();
  static FilterSpec smooth(std::function<double(double)> lambda, double support_end);

  double weight(double x) const;
  const char* name() const { return kind == Kind::hard_cutoff ? "hard" : "smooth"; }
};

/// Observations aligned with a design grid.
struct SinogramMeta {
  std::uint64_t seed = 0;
  std::string law;
  std::string phantom;
};

struct SinogramData {
  DesignGridPtr grid;
  Eigen::VectorXd y;
  SinogramMeta meta;

  void validate() const;
};

/// Weighted quadrature estimate of one coefficient of the transformed image:
/// sum_k w_k conj(psi_idx(z_k)) Y_k.
Complex estimate_coefficient(const SinogramData& data, const BasisIndex& idx);

/// Batch variant over an index list (one pass over the data).
Eigen::VectorXcd estimate_coefficients(const SinogramData& data,
                                       std::span<const BasisIndex> indices);

/// The regularized inverse: brain-space field with entries
/// sqrt(m+1) * Lambda(m/t) * R_hat(l, m) over all admissible (l, m) with
/// positive filter weight.
CoefficientField spectral_estimate(const SinogramData& data, int t,
                                   const FilterSpec& filter = FilterSpec::hard());

/// Estimate evaluated at disc points. Enforces a real result: an imaginary
/// residue above 1e-10 signals broken conjugate symmetry and throws.
std::vector<double> estimate_at(const SinogramData& data, int t, const FilterSpec& filter,
                                std::span<const BrainPoint> points);

/// Transformed estimate at the design points of `grid`: exact on the detector
/// side via the diagonal factors, no chord quadrature involved.
Eigen::VectorXd estimator_radon_trace(const SinogramData& data, int t,
                                      const FilterSpec& filter, const DesignGrid& grid);

/// Diagnostic: weighted coefficient sum over a detector-space field,
/// sum m^tau |c(l, m)| (0^0 counts as 1).
double ellipsoid_norm(const CoefficientField& detector_field, double tau);

/// Simulation-only bandwidth selector: minimizes the true sup-error against a
/// known target field over t in [1, t_max] on a polar evaluation grid.
int oracle_bandwidth(const SinogramData& data, const CoefficientField& truth,
                     const FilterSpec& filter, int t_max,
                     const Eigen::Ref<const Eigen::VectorXd>& eval_r,
                     const Eigen::Ref<const Eigen::VectorXd>& eval_theta);

}  // namespace rspec
