#pragma once

#include <functional>
#include <string>

#include "rspec/rng.hpp"
#include "rspec/types.hpp"

namespace rspec {

/// Mean-zero error distribution with the moments the residual-process
/// diagnostics need: cdf F, density f, the truncated first moment
/// E[eps 1{eps <= t}], and the variance. Closed forms per law.
class ErrorLaw {
 public:
  enum class Kind { gaussian, uniform, student_t, custom };

  static ErrorLaw gaussian(double sigma);
  /// Uniform on [a, b]; requires a + b == 0 (the errors are centred).
  static ErrorLaw uniform(double a, double b);
  /// Scaled Student-t; df > 3 so that the tail-moment assumptions hold.
  static ErrorLaw student_t(double df, double scale = 1.0);
  static ErrorLaw custom(std::string name,
                         std::function<double(double)> cdf,
                         std::function<double(double)> pdf,
                         std::function<double(double)> mean_below,
                         double variance,
                         std::function<double(Rng&)> sampler);

  double cdf(double t) const;
  double pdf(double t) const;
  /// E[eps 1{eps <= t}].
  double mean_below(double t) const;
  double variance() const { return variance_; }

  /// Inverse cdf by bisection (used to place evaluation grids).
  double quantile(double prob) const;

  double sample(Rng& rng) const;

  Kind kind() const { return kind_; }
  /// True when the density is positive on all of R (false for uniform);
  /// bounded-support laws restrict diagnostic grids to the interior.
  bool full_support() const { return kind_ != Kind::uniform; }

  /// Short descriptor, e.g. "gaussian(sigma=0.5)"; stable across runs.
  const std::string& describe() const { return name_; }

 private:
  ErrorLaw() = default;
  Kind kind_ = Kind::custom;
  std::string name_;
  double variance_ = 0.0;
  // gaussian: a_ = sigma; uniform: a_, b_ endpoints; student_t: a_ = df, b_ = scale.
  double a_ = 0.0, b_ = 0.0;
  double t_norm_const_ = 0.0;  // student-t density constant
  std::function<double(double)> custom_cdf_, custom_pdf_, custom_mean_below_;
  std::function<double(Rng&)> custom_sampler_;
};

namespace detail {
/// Regularized incomplete beta function I_x(a, b) (continued fraction).
double reg_incomplete_beta(double a, double b, double x);
double normal_cdf(double x);
double normal_pdf(double x);
}  // namespace detail

}  // namespace rspec
