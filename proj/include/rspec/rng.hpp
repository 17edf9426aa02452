#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "rspec/types.hpp"

namespace rspec {

/// Reproducible random stream. The generator and all transforms are pinned
/// (mt19937_64, explicit bit-to-double mapping, Box-Muller, polar-t), so a
/// seed determines the sample path independent of the standard library's
/// distribution implementations or the thread layout.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Stream for one replication: streams are derived as base_seed + index.
  static Rng replication_stream(std::uint64_t base_seed, std::uint64_t index) {
    return Rng(base_seed + index);
  }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform01() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Standard normal via Box-Muller (pairs cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = kTwoPi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Student-t with df degrees of freedom, polar method: with U, V uniform,
  /// sqrt(df (U^{-2/df} - 1)) cos(2 pi V) has the t(df) law.
  double student_t(double df) {
    const double u = uniform01();
    const double v = uniform01();
    const double radius = std::sqrt(df * (std::pow(u, -2.0 / df) - 1.0));
    return radius * std::cos(kTwoPi * v);
  }

  std::uint64_t raw() { return gen_(); }

  static constexpr const char* algorithm() {
    return "mt19937_64/box-muller/polar-t";
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rspec
