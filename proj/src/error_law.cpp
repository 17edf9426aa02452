#include "rspec/error_law.hpp"

#include <cmath>
#include <limits>

namespace rspec {
namespace detail {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(kTwoPi);
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double reg_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = a * std::log(x) + b * std::log1p(-x) -
                          (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

}  // namespace detail

ErrorLaw ErrorLaw::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw UsageError("gaussian law: sigma must be positive");
  ErrorLaw law;
  law.kind_ = Kind::gaussian;
  law.a_ = sigma;
  law.variance_ = sigma * sigma;
  law.name_ = "gaussian(sigma=" + std::to_string(sigma) + ")";
  return law;
}

ErrorLaw ErrorLaw::uniform(double a, double b) {
  if (!(a < b)) throw UsageError("uniform law: need a < b");
  if (std::abs(a + b) > 1e-12 * (b - a))
    throw UsageError("uniform law: errors must be centred (a + b == 0)");
  ErrorLaw law;
  law.kind_ = Kind::uniform;
  law.a_ = a;
  law.b_ = b;
  law.variance_ = (b - a) * (b - a) / 12.0;
  law.name_ = "uniform(" + std::to_string(a) + "," + std::to_string(b) + ")";
  return law;
}

ErrorLaw ErrorLaw::student_t(double df, double scale) {
  if (!(df > 3.0)) throw UsageError("student_t law: need df > 3");
  if (!(scale > 0.0)) throw UsageError("student_t law: scale must be positive");
  ErrorLaw law;
  law.kind_ = Kind::student_t;
  law.a_ = df;
  law.b_ = scale;
  law.variance_ = scale * scale * df / (df - 2.0);
  law.t_norm_const_ = std::exp(std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df)) /
                      std::sqrt(df * kPi);
  law.name_ = "student_t(df=" + std::to_string(df) + ",scale=" + std::to_string(scale) + ")";
  return law;
}

ErrorLaw ErrorLaw::custom(std::string name, std::function<double(double)> cdf,
                          std::function<double(double)> pdf,
                          std::function<double(double)> mean_below, double variance,
                          std::function<double(Rng&)> sampler) {
  ErrorLaw law;
  law.kind_ = Kind::custom;
  law.name_ = std::move(name);
  law.custom_cdf_ = std::move(cdf);
  law.custom_pdf_ = std::move(pdf);
  law.custom_mean_below_ = std::move(mean_below);
  law.variance_ = variance;
  law.custom_sampler_ = std::move(sampler);
  return law;
}

double ErrorLaw::cdf(double t) const {
  switch (kind_) {
    case Kind::gaussian:
      return detail::normal_cdf(t / a_);
    case Kind::uniform:
      if (t <= a_) return 0.0;
      if (t >= b_) return 1.0;
      return (t - a_) / (b_ - a_);
    case Kind::student_t: {
      const double x = t / b_;
      const double xx = x * x;
      // Complementary ibeta arguments; pick the one that is well conditioned
      // (small) so the cdf stays exact both near zero and in the tails.
      double tail;
      if (xx <= a_) {
        tail = 0.5 * (1.0 - detail::reg_incomplete_beta(0.5, 0.5 * a_, xx / (a_ + xx)));
      } else {
        tail = 0.5 * detail::reg_incomplete_beta(0.5 * a_, 0.5, a_ / (a_ + xx));
      }
      return x >= 0.0 ? 1.0 - tail : tail;
    }
    case Kind::custom:
      return custom_cdf_(t);
  }
  return 0.0;
}

double ErrorLaw::pdf(double t) const {
  switch (kind_) {
    case Kind::gaussian:
      return detail::normal_pdf(t / a_) / a_;
    case Kind::uniform:
      return (t < a_ || t > b_) ? 0.0 : 1.0 / (b_ - a_);
    case Kind::student_t: {
      const double x = t / b_;
      return t_norm_const_ * std::pow(1.0 + x * x / a_, -0.5 * (a_ + 1.0)) / b_;
    }
    case Kind::custom:
      return custom_pdf_(t);
  }
  return 0.0;
}

double ErrorLaw::mean_below(double t) const {
  switch (kind_) {
    case Kind::gaussian:
      // E[eps 1{eps <= t}] = -sigma phi(t/sigma) for N(0, sigma^2).
      return -a_ * detail::normal_pdf(t / a_);
    case Kind::uniform: {
      if (t <= a_) return 0.0;
      const double upper = std::min(t, b_);
      return (upper * upper - a_ * a_) / (2.0 * (b_ - a_));
    }
    case Kind::student_t: {
      // Antiderivative of x f(x) for the unit t(df) law evaluated at t/scale,
      // scaled back; vanishes at +inf because df > 1.
      const double x = t / b_;
      const double unit =
          -t_norm_const_ * (a_ / (a_ - 1.0)) * std::pow(1.0 + x * x / a_, -0.5 * (a_ - 1.0));
      return b_ * unit;
    }
    case Kind::custom:
      return custom_mean_below_(t);
  }
  return 0.0;
}

double ErrorLaw::quantile(double prob) const {
  if (!(prob > 0.0 && prob < 1.0))
    throw std::domain_error("quantile: probability must lie in (0, 1)");
  // Bracket, then bisect; 200 halvings reach full double resolution.
  double lo = -1.0, hi = 1.0;
  while (cdf(lo) > prob) lo *= 2.0;
  while (cdf(hi) < prob) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < prob ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double ErrorLaw::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::gaussian:
      return a_ * rng.normal();
    case Kind::uniform:
      return rng.uniform(a_, b_);
    case Kind::student_t:
      return b_ * rng.student_t(a_);
    case Kind::custom:
      return custom_sampler_(rng);
  }
  return 0.0;
}

}  // namespace rspec
