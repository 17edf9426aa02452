#include <cmath>

#include "doctest.h"
#include "rspec/basis.hpp"
#include "rspec/experiment.hpp"
#include "rspec/quadrature.hpp"
#include "rspec/radon.hpp"

using namespace rspec;

namespace {

SinogramData constant_data(DesignGridPtr grid, double value) {
  SinogramData data;
  data.y = Eigen::VectorXd::Constant(grid->n(), value);
  data.grid = std::move(grid);
  return data;
}

// Brute-force detector-space inner product <Rg, psi_idx> by dense product
// quadrature (sin substitution radially, uniform angles).
Complex inner_product_oracle(const CoefficientField& detector_field,
                             const BasisIndex& idx) {
  const int n_rad = 100, n_ang = 256;
  const auto& rule = gauss_legendre(n_rad);
  Complex acc{0.0, 0.0};
  for (int i = 0; i < n_rad; ++i) {
    const double alpha = 0.25 * kPi * (rule.nodes[i] + 1.0);
    const double s = std::sin(alpha);
    const double c = std::cos(alpha);
    const double w_rad = 0.25 * kPi * rule.weights[i] * c * c;
    for (int a = 0; a < n_ang; ++a) {
      const double phi = kTwoPi * a / n_ang;
      const DetectorPoint z{s, phi};
      const double w = w_rad * (2.0 / (kPi * kPi)) * (kTwoPi / n_ang);
      acc += w * std::conj(psi(idx, z)) * evaluate_expansion(detector_field, z);
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("coefficient estimates: pinned values and linearity") {
  auto grid = make_grid(6, 2.0);
  const SinogramData ones = constant_data(grid, 1.0);
  CHECK(estimate_coefficient(ones, {0, 0}).real() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(estimate_coefficient(ones, {0, 0}).imag()) < 1e-15);

  const SinogramData zeros = constant_data(grid, 0.0);
  CHECK(std::abs(estimate_coefficient(zeros, {2, 4})) == 0.0);

  Rng rng(41);
  SinogramData d1 = constant_data(grid, 0.0);
  SinogramData d2 = constant_data(grid, 0.0);
  for (Eigen::Index k = 0; k < grid->n(); ++k) {
    d1.y[k] = rng.uniform(-1.0, 1.0);
    d2.y[k] = rng.uniform(-1.0, 1.0);
  }
  SinogramData combo = constant_data(grid, 0.0);
  combo.y = 2.0 * d1.y - 0.5 * d2.y;
  for (const BasisIndex& idx : index_set(3)) {
    const Complex lhs = estimate_coefficient(combo, idx);
    const Complex rhs =
        2.0 * estimate_coefficient(d1, idx) - 0.5 * estimate_coefficient(d2, idx);
    CHECK(std::abs(lhs - rhs) < 1e-14);
  }

  // Batch path agrees with the scalar path.
  const auto indices = index_set(3);
  const Eigen::VectorXcd batch = estimate_coefficients(d1, indices);
  for (std::size_t j = 0; j < indices.size(); ++j)
    CHECK(std::abs(batch[static_cast<Eigen::Index>(j)] -
                   estimate_coefficient(d1, indices[j])) < 1e-14);
}

TEST_CASE("noise-free coefficient error is quadrature-sized") {
  // Response from the degree-1 pair phantom; its only nonzero inner products
  // are c/sqrt(2) at (l, m) = (+-1, 1).
  const double c = 0.8;
  const PhantomSpec phantom =
      PhantomSpec::finite({{{1, 1}, Complex{c, 0.0}}, {{-1, 1}, Complex{c, 0.0}}});
  auto grid = make_grid(32);
  SinogramData data;
  data.grid = grid;
  data.y = phantom_radon_trace(phantom, *grid);

  const double exact = c / std::sqrt(2.0);
  // Cross-check the asserted limit with the dense quadrature oracle.
  const Complex oracle =
      inner_product_oracle(svd_forward(phantom.coefficients()), {1, 1});
  CHECK(oracle.real() == doctest::Approx(exact).epsilon(1e-10));
  CHECK(std::abs(oracle.imag()) < 1e-12);

  const Complex est = estimate_coefficient(data, {1, 1});
  const double n = static_cast<double>(grid->n());
  CHECK(std::abs(est - Complex{exact, 0.0}) <= 5.0 / n);  // 5 m^5 / n with m = 1
}

TEST_CASE("bandwidth rule: pinned values, monotonicity, guards") {
  CHECK(default_bandwidth(2, {5.0, 1.0}) == 1);
  CHECK(default_bandwidth(10000, {5.0, 1.0}) == 1);
  CHECK(default_bandwidth(1 << 21, {5.0, 1.0}) == 2);  // past the t = 2 threshold

  for (double scale : {1.0, 5.0}) {
    int prev = 0;
    for (Eigen::Index n = 2; n <= (1 << 24); n *= 2) {
      const int t = default_bandwidth(n, {5.0, scale});
      CHECK(t >= prev);
      prev = t;
    }
  }
  CHECK(default_bandwidth(100, {5.0, 1e9}) == kDefaultDegreeCap);
  CHECK_THROWS_AS(default_bandwidth(1, {5.0, 1.0}), UsageError);
  CHECK_THROWS_AS(default_bandwidth(100, {4.0, 1.0}), UsageError);
  CHECK_THROWS_AS(default_bandwidth(100, {5.0, 0.0}), UsageError);
}

TEST_CASE("spectral estimate: zero data, filters, exact reconstruction") {
  auto grid = make_grid(16);
  const SinogramData zeros = constant_data(grid, 0.0);
  const CoefficientField zero_field = spectral_estimate(zeros, 3);
  for (const auto& [idx, v] : zero_field) CHECK(std::abs(v) == 0.0);
  CHECK(evaluate_expansion(zero_field, BrainPoint{0.4, 1.0}) == Complex{0.0, 0.0});

  // Hard cutoff is the indicator-taper special case, bit for bit.
  Rng rng(42);
  SinogramData noisy = constant_data(grid, 0.0);
  for (Eigen::Index k = 0; k < grid->n(); ++k) noisy.y[k] = rng.normal();
  const CoefficientField hard = spectral_estimate(noisy, 4, FilterSpec::hard());
  const FilterSpec indicator =
      FilterSpec::smooth([](double x) { return x <= 1.0 ? 1.0 : 0.0; }, 1.0);
  const CoefficientField smooth_ind = spectral_estimate(noisy, 4, indicator);
  CHECK(hard == smooth_ind);

  // The default taper keeps m < t only.
  const CoefficientField tapered = spectral_estimate(noisy, 4, FilterSpec::smooth());
  CHECK(tapered.max_degree() == 3);
  CHECK(hard.max_degree() == 4);

  CHECK_THROWS_AS(spectral_estimate(noisy, kDefaultDegreeCap + 1, FilterSpec::hard()),
                  CapabilityError);
}

TEST_CASE("noise-free reconstruction error at matched bandwidth") {
  const PhantomSpec phantom = PhantomSpec::finite({{{0, 0}, {0.6, 0.0}},
                                                   {{1, 1}, std::polar(0.4, 0.7)},
                                                   {{0, 2}, {-0.3, 0.0}},
                                                   {{2, 2}, std::polar(0.25, -1.1)}});
  auto grid = make_grid(64);
  SinogramData data;
  data.grid = grid;
  data.y = phantom_radon_trace(phantom, *grid);

  const CoefficientField estimate = spectral_estimate(data, 2);
  const PolarGrid eval = PolarGrid::make(50, 50, 0.99);
  const double err = sup_error_on_grid(estimate, phantom.coefficients(), eval);
  CHECK(err <= 1e-3);
}

TEST_CASE("estimate_at enforces a real-valued result") {
  auto grid = make_grid(8);
  Rng rng(43);
  SinogramData data = constant_data(grid, 0.0);
  for (Eigen::Index k = 0; k < grid->n(); ++k) data.y[k] = rng.uniform(-1.0, 1.0);
  const std::vector<BrainPoint> points{{0.2, 0.3}, {0.7, 4.0}, {0.95, 2.2}};
  const std::vector<double> values = estimate_at(data, 2, FilterSpec::hard(), points);
  const CoefficientField field = spectral_estimate(data, 2);
  for (std::size_t i = 0; i < points.size(); ++i)
    CHECK(values[i] == doctest::Approx(evaluate_expansion(field, points[i]).real()));
}

TEST_CASE("estimator trace: pinned cases and chord-quadrature oracle") {
  auto grid = make_grid(12);
  const SinogramData zeros = constant_data(grid, 0.0);
  CHECK(estimator_radon_trace(zeros, 2, FilterSpec::hard(), *grid).cwiseAbs().maxCoeff() ==
        0.0);

  const SinogramData ones = constant_data(grid, 3.7);
  const Eigen::VectorXd trace = estimator_radon_trace(ones, 1, FilterSpec::hard(), *grid);
  // The constant component survives with scaling one; coefficients at m = 1
  // pick up only quadrature-level mass.
  for (Eigen::Index k = 0; k < grid->n(); ++k)
    CHECK(trace[k] == doctest::Approx(3.7).epsilon(1e-3));

  Rng rng(44);
  SinogramData noisy = constant_data(grid, 0.0);
  for (Eigen::Index k = 0; k < grid->n(); ++k) noisy.y[k] = rng.normal();
  const CoefficientField est = spectral_estimate(noisy, 3);
  const FieldFunction est_fn = field_from_coefficients(est);
  const Eigen::VectorXd got = estimator_radon_trace(noisy, 3, FilterSpec::hard(), *grid);
  for (int i = 0; i < 10; ++i) {
    const Eigen::Index k = static_cast<Eigen::Index>(rng.uniform01() * grid->n());
    CHECK(got[k] ==
          doctest::Approx(radon_line_integral(est_fn, grid->point(k), 128)).epsilon(1e-6));
  }
}

TEST_CASE("truncation bias decreases when the bandwidth opens up") {
  // A rough phantom (coefficient decay (m+1)^-5) keeps the truncation bias
  // above the design-quadrature floor at this n, so the noise-free error is
  // bias-dominated at t = 2 and drops once the cutoff clears the heavy
  // frequencies. The default phantom decays too fast to show the effect: its
  // t = 6 error is all quadrature.
  const PhantomSpec phantom = PhantomSpec::decaying(2.0, 1.0, 12, 2026);
  auto grid = make_grid(64);
  SinogramData data;
  data.grid = grid;
  data.y = phantom_radon_trace(phantom, *grid);
  const PolarGrid eval = PolarGrid::make(50, 50, 0.99);
  const double err_t2 =
      sup_error_on_grid(spectral_estimate(data, 2), phantom.coefficients(), eval);
  const double err_t6 =
      sup_error_on_grid(spectral_estimate(data, 6), phantom.coefficients(), eval);
  CHECK(err_t2 > err_t6);
}

TEST_CASE("pure-noise sup-norm grows with the bandwidth") {
  const PhantomSpec zero_phantom = PhantomSpec::finite({});
  auto grid = make_grid(16);
  const ErrorLaw law = ErrorLaw::gaussian(1.0);
  const PolarGrid eval = PolarGrid::make(50, 50, 0.99);
  const int reps = 200;

  std::map<int, double> mean_sup;
  for (int t : {1, 3, 5}) {
    double acc = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      const SinogramData data = generate_data(zero_phantom, grid, law, 500 + rep);
      const CoefficientField est = spectral_estimate(data, t);
      acc += sup_error_on_grid(est, zero_phantom.coefficients(), eval);
    }
    mean_sup[t] = acc / reps;
  }
  CHECK(mean_sup[1] < mean_sup[3]);
  CHECK(mean_sup[3] < mean_sup[5]);
}

TEST_CASE("ellipsoid norm diagnostic") {
  CoefficientField field(SpaceTag::detector);
  field.set({0, 0}, {0.5, 0.0});
  field.set({1, 1}, {0.0, 2.0});
  field.set({0, 2}, {-1.0, 0.0});
  // 0^tau |c00| drops out for tau > 0; tau = 0 counts every entry.
  CHECK(ellipsoid_norm(field, 2.0) == doctest::Approx(2.0 + 4.0));
  CHECK(ellipsoid_norm(field, 0.0) == doctest::Approx(0.5 + 2.0 + 1.0));
  CHECK_THROWS_AS(ellipsoid_norm(CoefficientField(SpaceTag::brain), 1.0), UsageError);
}

TEST_CASE("oracle bandwidth recovers the exact phantom degree") {
  const PhantomSpec phantom =
      PhantomSpec::finite({{{0, 0}, {0.5, 0.0}}, {{0, 2}, {0.4, 0.0}}});
  auto grid = make_grid(32);
  SinogramData data;
  data.grid = grid;
  data.y = phantom_radon_trace(phantom, *grid);
  const PolarGrid eval = PolarGrid::make(30, 30, 0.99);
  CHECK(oracle_bandwidth(data, phantom.coefficients(), FilterSpec::hard(), 8, eval.r,
                         eval.theta) == 2);
}
