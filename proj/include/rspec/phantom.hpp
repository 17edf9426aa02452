#pragma once

#include "rspec/field.hpp"

namespace rspec {

/// Synthetic attenuation profile given by a conjugate-symmetric coefficient
/// field. The smoothness diagnostic sum_{(l,m)} (m+1)^{v-1/2} |c(l,m)| (the
/// detector-side class sum of the field) is computed at construction.
class PhantomSpec {
 public:
  /// Field with the given entries; mirrored entries (-l, m) are filled in by
  /// conjugation when absent, and validated when present.
  static PhantomSpec finite(const std::vector<std::pair<BasisIndex, Complex>>& entries,
                            double v = 5.0);

  /// Coefficients |c(l,m)| = amplitude * (m+1)^{-(v+3)} for every admissible
  /// (l, m) with m <= max_degree; phases are drawn from `seed` and mirrored
  /// so the field evaluates real. The decay exponent v+3 keeps the class sum
  /// finite with margin (it behaves like sum (m+1)^{-5/2}).
  static PhantomSpec decaying(double v, double amplitude, int max_degree,
                              std::uint64_t seed);

  const CoefficientField& coefficients() const { return field_; }
  int max_degree() const { return field_.max_degree(); }
  double smoothness_v() const { return v_; }
  /// sum (m+1)^{v-1/2} |c(l,m)|, finite by construction.
  double smoothness_sum() const { return smoothness_sum_; }
  const std::string& id() const { return id_; }

  double evaluate(const BrainPoint& p) const {
    return evaluate_expansion_real(field_, p);
  }
  FieldFunction as_field_function() const { return field_from_coefficients(field_); }

 private:
  PhantomSpec(CoefficientField field, double v, std::string id);
  CoefficientField field_;
  double v_ = 0.0;
  double smoothness_sum_ = 0.0;
  std::string id_;
};

}  // namespace rspec
