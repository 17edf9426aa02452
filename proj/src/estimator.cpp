#include "rspec/estimator.hpp"

#include <cmath>
#include <limits>

#include "rspec/basis.hpp"
#include "rspec/radon.hpp"

namespace rspec {

int default_bandwidth(Eigen::Index n, const BandwidthRule& rule) {
  if (n < 2) throw UsageError("default_bandwidth: need n >= 2");
  if (!(rule.v >= 5.0)) throw UsageError("default_bandwidth: rule requires v >= 5");
  if (!(rule.scale > 0.0)) throw UsageError("default_bandwidth: scale must be positive");
  const double nn = static_cast<double>(n);
  const double value =
      rule.scale * std::pow(nn / std::log(nn), 1.0 / (2.0 * (rule.v + 3.0)));
  const int t = static_cast<int>(std::floor(value));
  return std::min(std::max(1, t), kDefaultDegreeCap);
}

FilterSpec FilterSpec::smooth() {
  return smooth([](double x) { return std::min(1.0, std::max(0.0, 2.0 - 2.0 * x)); }, 1.0);
}

FilterSpec FilterSpec::smooth(std::function<double(double)> lambda, double support_end) {
  if (!lambda) throw UsageError("FilterSpec: smooth filter needs a taper function");
  if (!(support_end > 0.0)) throw UsageError("FilterSpec: support must be positive");
  FilterSpec f;
  f.kind = Kind::smooth;
  f.lambda = std::move(lambda);
  f.support_end = support_end;
  return f;
}

double FilterSpec::weight(double x) const {
  if (x > support_end) return 0.0;
  const double w = kind == Kind::hard_cutoff ? 1.0 : lambda(x);
  if (w < 0.0 || w > 1.0)
    throw ConsistencyError("filter weight outside [0, 1] at x = " + std::to_string(x));
  return w;
}

void SinogramData::validate() const {
  if (!grid) throw UsageError("SinogramData: missing grid");
  if (y.size() != grid->n())
    throw UsageError("SinogramData: observation count does not match the grid");
  if (!y.allFinite()) throw UsageError("SinogramData: non-finite observation");
}

Complex estimate_coefficient(const SinogramData& data, const BasisIndex& idx) {
  require_index(idx);
  data.validate();
  const DesignGrid& g = *data.grid;
  Complex acc{0.0, 0.0};
  for (Eigen::Index k = 0; k < g.n(); ++k)
    acc += g.weight(k) * std::conj(psi(idx, g.point(k))) * data.y[k];
  return acc;
}

Eigen::VectorXcd estimate_coefficients(const SinogramData& data,
                                       std::span<const BasisIndex> indices) {
  data.validate();
  const DesignGrid& g = *data.grid;
  const Eigen::MatrixXcd basis = psi_matrix(g.s(), g.phi(), indices);
  const Eigen::VectorXd wy = g.weights().cwiseProduct(data.y);
  return basis.adjoint() * wy.cast<Complex>();
}

namespace {

std::vector<BasisIndex> filtered_indices(int t, const FilterSpec& filter) {
  if (t < 1) throw UsageError("spectral_estimate: bandwidth must be positive");
  if (t > kDefaultDegreeCap)
    throw CapabilityError("bandwidth " + std::to_string(t) + " exceeds the degree cap");
  const int m_max = std::min<int>(
      kDefaultDegreeCap, static_cast<int>(std::floor(t * filter.support_end + 1e-9)));
  std::vector<BasisIndex> out;
  for (const BasisIndex& idx : index_set(m_max))
    if (filter.weight(static_cast<double>(idx.m) / t) > 0.0) out.push_back(idx);
  return out;
}

}  // namespace

CoefficientField spectral_estimate(const SinogramData& data, int t,
                                   const FilterSpec& filter) {
  const std::vector<BasisIndex> indices = filtered_indices(t, filter);
  const Eigen::VectorXcd raw = estimate_coefficients(data, indices);
  CoefficientField field(SpaceTag::brain);
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const BasisIndex idx = indices[j];
    const double lam = filter.weight(static_cast<double>(idx.m) / t);
    field.set(idx, std::sqrt(static_cast<double>(idx.m + 1)) * lam *
                       raw[static_cast<Eigen::Index>(j)]);
  }
  return field;
}

std::vector<double> estimate_at(const SinogramData& data, int t, const FilterSpec& filter,
                                std::span<const BrainPoint> points) {
  const CoefficientField field = spectral_estimate(data, t, filter);
  std::vector<double> out;
  out.reserve(points.size());
  for (const BrainPoint& p : points) {
    const Complex value = evaluate_expansion(field, p);
    if (std::abs(value.imag()) > 1e-10)
      throw ConsistencyError(
          "estimate_at: imaginary residue above 1e-10, conjugate symmetry is broken");
    out.push_back(value.real());
  }
  return out;
}

Eigen::VectorXd estimator_radon_trace(const SinogramData& data, int t,
                                      const FilterSpec& filter, const DesignGrid& grid) {
  const CoefficientField detector = svd_forward(spectral_estimate(data, t, filter));
  std::vector<BasisIndex> indices;
  Eigen::VectorXcd coeffs(static_cast<Eigen::Index>(detector.size()));
  Eigen::Index j = 0;
  for (const auto& [idx, v] : detector) {
    indices.push_back(idx);
    coeffs[j++] = v;
  }
  if (indices.empty()) return Eigen::VectorXd::Zero(grid.n());
  const Eigen::VectorXcd values = psi_matrix(grid.s(), grid.phi(), indices) * coeffs;
  if (values.size() > 0 && values.imag().cwiseAbs().maxCoeff() > 1e-10)
    throw ConsistencyError("estimator_radon_trace: trace is not real");
  return values.real();
}

double ellipsoid_norm(const CoefficientField& detector_field, double tau) {
  require_tag(detector_field, SpaceTag::detector, "ellipsoid_norm");
  double acc = 0.0;
  for (const auto& [idx, v] : detector_field)
    acc += std::pow(static_cast<double>(idx.m), tau) * std::abs(v);
  return acc;
}

int oracle_bandwidth(const SinogramData& data, const CoefficientField& truth,
                     const FilterSpec& filter, int t_max,
                     const Eigen::Ref<const Eigen::VectorXd>& eval_r,
                     const Eigen::Ref<const Eigen::VectorXd>& eval_theta) {
  require_tag(truth, SpaceTag::brain, "oracle_bandwidth");
  if (t_max < 1) throw UsageError("oracle_bandwidth: t_max must be positive");
  Eigen::VectorXd target(eval_r.size());
  for (Eigen::Index k = 0; k < eval_r.size(); ++k)
    target[k] = evaluate_expansion_real(truth, BrainPoint{eval_r[k], eval_theta[k]});

  int best_t = 1;
  double best_err = std::numeric_limits<double>::infinity();
  for (int t = 1; t <= std::min(t_max, kDefaultDegreeCap); ++t) {
    const CoefficientField est = spectral_estimate(data, t, filter);
    double err = 0.0;
    for (Eigen::Index k = 0; k < eval_r.size(); ++k) {
      const Complex v = evaluate_expansion(est, BrainPoint{eval_r[k], eval_theta[k]});
      err = std::max(err, std::abs(v.real() - target[k]));
    }
    if (err < best_err) {
      best_err = err;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace rspec
