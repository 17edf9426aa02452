#include "rspec/phantom.hpp"

#include <cmath>

#include "rspec/rng.hpp"

namespace rspec {

PhantomSpec::PhantomSpec(CoefficientField field, double v, std::string id)
    : field_(std::move(field)), v_(v), id_(std::move(id)) {
  if (!field_.is_conjugate_symmetric(1e-12))
    throw UsageError("phantom coefficients must be conjugate symmetric");
  for (const auto& [idx, c] : field_)
    smoothness_sum_ += std::pow(static_cast<double>(idx.m + 1), v_ - 0.5) * std::abs(c);
  if (!std::isfinite(smoothness_sum_))
    throw ConsistencyError("phantom smoothness sum is not finite");
}

PhantomSpec PhantomSpec::finite(const std::vector<std::pair<BasisIndex, Complex>>& entries,
                                double v) {
  CoefficientField field(SpaceTag::brain);
  for (const auto& [idx, c] : entries) field.set(idx, c);
  // Complete the mirror entries so callers may specify only l >= 0.
  for (const auto& [idx, c] : entries) {
    const BasisIndex mirror{-idx.l, idx.m};
    if (field.get(mirror) == Complex{0.0, 0.0} && idx.l != 0)
      field.set(mirror, std::conj(c));
  }
  return PhantomSpec(std::move(field), v,
                     "finite(" + std::to_string(entries.size()) + " entries)");
}

PhantomSpec PhantomSpec::decaying(double v, double amplitude, int max_degree,
                                  std::uint64_t seed) {
  if (!(v >= 1.0)) throw UsageError("decaying phantom: need v >= 1");
  if (max_degree < 0 || max_degree > kDefaultDegreeCap)
    throw UsageError("decaying phantom: max_degree out of range");
  CoefficientField field(SpaceTag::brain);
  Rng rng(seed);
  for (int m = 0; m <= max_degree; ++m) {
    const double mag = amplitude * std::pow(static_cast<double>(m + 1), -(v + 3.0));
    for (int l = m % 2 == 0 ? 0 : 1; l <= m; l += 2) {
      if (l == 0) {
        field.set({0, m}, Complex{mag, 0.0});
        continue;
      }
      const double phase = rng.uniform(0.0, kTwoPi);
      field.set({l, m}, std::polar(mag, phase));
      field.set({-l, m}, std::polar(mag, -phase));
    }
  }
  return PhantomSpec(std::move(field), v,
                     "decaying(v=" + std::to_string(v) + ",A=" + std::to_string(amplitude) +
                         ",M=" + std::to_string(max_degree) +
                         ",seed=" + std::to_string(seed) + ")");
}

}  // namespace rspec
