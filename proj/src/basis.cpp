#include "rspec/basis.hpp"

#include <cmath>

namespace rspec {
namespace {

// Binomial coefficients up to n = kDefaultDegreeCap fit in 64 bits
// (C(50,25) ~ 1.3e14).
std::vector<std::vector<std::uint64_t>> binomial_rows(int n_max) {
  std::vector<std::vector<std::uint64_t>> rows(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    rows[n].resize(n + 1, 1);
    for (int k = 1; k < n; ++k) rows[n][k] = rows[n - 1][k - 1] + rows[n - 1][k];
  }
  return rows;
}

void require_supported(const BasisIndex& idx, int cap) {
  require_index(idx);
  if (idx.m > cap)
    throw CapabilityError("degree m = " + std::to_string(idx.m) +
                          " exceeds the configured cap " + std::to_string(cap));
}

}  // namespace

RadialTable::RadialTable(int degree_cap) : cap_(degree_cap) {
  if (degree_cap < 0) throw UsageError("degree cap must be nonnegative");
  const auto binom = binomial_rows(degree_cap);
  offset_.assign(block_index(degree_cap, degree_cap) + 2, 0);
  // First pass: block sizes; second pass: fill coefficients.
  for (int m = 0; m <= cap_; ++m)
    for (int al = m % 2; al <= m; al += 2)
      offset_[block_index(al, m) + 1] = static_cast<std::size_t>((m - al) / 2 + 1);
  for (std::size_t i = 1; i < offset_.size(); ++i) offset_[i] += offset_[i - 1];
  coeff_.resize(offset_.back());

  for (int m = 0; m <= cap_; ++m) {
    for (int al = m % 2; al <= m; al += 2) {
      const int b = (m - al) / 2;  // number of terms minus one
      const int a = (m + al) / 2;
      double* dst = coeff_.data() + offset_[block_index(al, m)];
      for (int j = 0; j <= b; ++j) {
        // (m-j)! / (j! (a-j)! (b-j)!) = C(m-j, j) * C(m-2j, a-j), exact.
        const auto prod = static_cast<unsigned __int128>(binom[m - j][j]) *
                          static_cast<unsigned __int128>(binom[m - 2 * j][a - j]);
        const double mag = static_cast<double>(prod);
        dst[j] = (j % 2 == 0) ? mag : -mag;
      }
    }
  }
}

std::size_t RadialTable::block_index(int abs_l, int m) const {
  // Degree d holds floor(d/2)+1 blocks (abs_l in {d mod 2, ..., d} step 2);
  // summed over d < m this gives (m/2)(m/2+1) for even m and ((m+1)/2)^2 for odd.
  const std::size_t half = static_cast<std::size_t>(m / 2);
  const std::size_t base = (m % 2 == 0) ? half * (half + 1) : (half + 1) * (half + 1);
  return base + static_cast<std::size_t>((abs_l - (m % 2)) / 2);
}

std::span<const double> RadialTable::coefficients(int l, int m) const {
  require_supported({l, m}, cap_);
  const std::size_t id = block_index(std::abs(l), m);
  return {coeff_.data() + offset_[id], offset_[id + 1] - offset_[id]};
}

double RadialTable::evaluate(int l, int m, double r) const {
  const auto c = coefficients(l, m);
  const double u = r * r;
  double acc = c[0];
  for (std::size_t j = 1; j < c.size(); ++j) acc = acc * u + c[j];
  const int al = std::abs(l);
  return al == 0 ? acc : acc * std::pow(r, al);
}

const RadialTable& RadialTable::standard() {
  static const RadialTable table(kDefaultDegreeCap);
  return table;
}

double radial_poly(const BasisIndex& idx, double r) {
  return RadialTable::standard().evaluate(idx.l, idx.m, r);
}

namespace {

// d/dr R_m^{|l|} expands into radial polynomials of degree m-1 with angular
// index |l -+ 1|; applying it k times stays inside the family.
double radial_deriv_impl(int abs_l, int m, int k, double r, const RadialTable& table) {
  if (k == 0) return table.evaluate(abs_l, m, r);
  if (m == 0) return 0.0;
  double acc = 0.0;
  for (int step : {-1, +1}) {
    const int lb = std::abs(abs_l + step);
    for (int j = 0; 2 * j <= m - 1 - lb; ++j)
      acc += (m - 2 * j) * radial_deriv_impl(lb, m - 1 - 2 * j, k - 1, r, table);
  }
  return acc;
}

double chebyshev_T_deriv_impl(int m, int k, double s);

double chebyshev_U_deriv_impl(int m, int k, double s) {
  if (k == 0) return chebyshev_U(m, s);
  if (m == 0) return 0.0;
  double acc = 0.0;
  const double mp1_sq = static_cast<double>(m + 1) * (m + 1);
  for (int j = m - 1; j >= 0; j -= 2) {
    double c = mp1_sq - static_cast<double>(j) * j;
    if (j == 0) c *= 0.5;
    acc += c * chebyshev_T_deriv_impl(j, k - 1, s);
  }
  return acc;
}

double chebyshev_T_deriv_impl(int m, int k, double s) {
  if (k == 0) return chebyshev_T(m, s);
  if (m == 0) return 0.0;
  return m * chebyshev_U_deriv_impl(m - 1, k - 1, s);
}

void require_order(int order) {
  if (order < 0) throw UsageError("derivative order must be nonnegative");
  if (order > kMaxDerivativeOrder)
    throw CapabilityError("derivative order " + std::to_string(order) +
                          " exceeds the supported maximum " +
                          std::to_string(kMaxDerivativeOrder));
}

}  // namespace

double radial_poly_derivative(const BasisIndex& idx, int order, double r) {
  const auto& table = RadialTable::standard();
  require_supported(idx, table.degree_cap());
  require_order(order);
  return radial_deriv_impl(std::abs(idx.l), idx.m, order, r, table);
}

double chebyshev_U_derivative(int m, int order, double s) {
  if (m < 0) throw std::domain_error("chebyshev_U_derivative: m must be nonnegative");
  require_order(order);
  return chebyshev_U_deriv_impl(m, order, s);
}

double chebyshev_T_derivative(int m, int order, double s) {
  if (m < 0) throw std::domain_error("chebyshev_T_derivative: m must be nonnegative");
  require_order(order);
  return chebyshev_T_deriv_impl(m, order, s);
}

Complex zernike_phi(const BasisIndex& idx, const BrainPoint& p) {
  require_index(idx);
  const double radial = radial_poly(idx, p.r);
  return std::sqrt(static_cast<double>(idx.m + 1)) * radial *
         std::polar(1.0, idx.l * p.theta);
}

Complex psi(const BasisIndex& idx, const DetectorPoint& d) {
  require_index(idx);
  return chebyshev_U(idx.m, d.s) * std::polar(1.0, idx.l * d.phi);
}

Complex zernike_phi_total(int l, int m, const BrainPoint& p) {
  if (!in_index_set(l, m)) return {0.0, 0.0};
  return zernike_phi({l, m}, p);
}

Complex psi_total(int l, int m, const DetectorPoint& d) {
  if (!in_index_set(l, m)) return {0.0, 0.0};
  return psi({l, m}, d);
}

Eigen::MatrixXcd zernike_matrix(const Eigen::Ref<const Eigen::VectorXd>& r,
                                const Eigen::Ref<const Eigen::VectorXd>& theta,
                                std::span<const BasisIndex> indices) {
  if (r.size() != theta.size()) throw UsageError("zernike_matrix: size mismatch");
  Eigen::MatrixXcd out(r.size(), static_cast<Eigen::Index>(indices.size()));
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const BasisIndex idx = indices[static_cast<std::size_t>(j)];
    require_index(idx);
    const double scale = std::sqrt(static_cast<double>(idx.m + 1));
    for (Eigen::Index k = 0; k < out.rows(); ++k)
      out(k, j) = scale * radial_poly(idx, r[k]) * std::polar(1.0, idx.l * theta[k]);
  }
  return out;
}

Eigen::MatrixXcd psi_matrix(const Eigen::Ref<const Eigen::VectorXd>& s,
                            const Eigen::Ref<const Eigen::VectorXd>& phi,
                            std::span<const BasisIndex> indices) {
  if (s.size() != phi.size()) throw UsageError("psi_matrix: size mismatch");
  Eigen::MatrixXcd out(s.size(), static_cast<Eigen::Index>(indices.size()));
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const BasisIndex idx = indices[static_cast<std::size_t>(j)];
    require_index(idx);
    for (Eigen::Index k = 0; k < out.rows(); ++k)
      out(k, j) = chebyshev_U(idx.m, s[k]) * std::polar(1.0, idx.l * phi[k]);
  }
  return out;
}

}  // namespace rspec
