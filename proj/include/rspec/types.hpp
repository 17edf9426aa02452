#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rspec {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Default maximum polynomial degree supported by the coefficient tables.
inline constexpr int kDefaultDegreeCap = 50;

// Error taxonomy. std::domain_error is used directly for out-of-domain
// arguments; the three below cover the remaining failure classes.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Index (l, m) of one singular pair: angular frequency l, degree m.
/// Valid indices satisfy |l| <= m and m - |l| even.
struct BasisIndex {
  int l = 0;
  int m = 0;

  friend constexpr auto operator<=>(const BasisIndex& a, const BasisIndex& b) {
    if (auto c = a.m <=> b.m; c != 0) return c;
    return a.l <=> b.l;
  }
  friend constexpr bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

constexpr bool in_index_set(int l, int m) {
  return m >= 0 && std::abs(l) <= m && (m - l) % 2 == 0;
}
constexpr bool in_index_set(const BasisIndex& idx) { return in_index_set(idx.l, idx.m); }

inline void require_index(const BasisIndex& idx) {
  if (!in_index_set(idx))
    throw std::domain_error("basis index (" + std::to_string(idx.l) + "," +
                            std::to_string(idx.m) + ") is not admissible");
}

/// All admissible (l, m) with m <= max_degree, ordered by (m, l).
/// The count is (M+1)(M+2)/2 for max_degree M.
inline std::vector<BasisIndex> index_set(int max_degree) {
  std::vector<BasisIndex> out;
  if (max_degree < 0) return out;
  out.reserve(static_cast<std::size_t>(max_degree + 1) * (max_degree + 2) / 2);
  for (int m = 0; m <= max_degree; ++m)
    for (int l = -m; l <= m; l += 2) out.push_back({l, m});
  return out;
}

/// Point on the unit disc in polar coordinates, r in [0,1], theta in [0,2pi].
struct BrainPoint {
  double r = 0.0;
  double theta = 0.0;
};

/// Chord coordinates: offset s in [0,1] from the origin, angle phi in [0,2pi].
struct DetectorPoint {
  double s = 0.0;
  double phi = 0.0;
};

}  // namespace rspec
