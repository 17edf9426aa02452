#include "rspec/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rspec {
namespace {

void require_probability_weights(const Eigen::Ref<const Eigen::VectorXd>& w) {
  if ((w.array() < 0.0).any()) throw UsageError("weights must be nonnegative");
  if (std::abs(w.sum() - 1.0) > 1e-9) throw UsageError("weights must sum to one");
}

// Sorted (value, weight) pairs with cumulative weights for ECDF sweeps.
struct SortedEcdf {
  std::vector<double> values;
  std::vector<double> cumulative;

  SortedEcdf(const Eigen::Ref<const Eigen::VectorXd>& res,
             const Eigen::Ref<const Eigen::VectorXd>& w) {
    std::vector<Eigen::Index> order(res.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return res[a] < res[b]; });
    values.resize(order.size());
    cumulative.resize(order.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      values[i] = res[order[i]];
      acc += w[order[i]];
      cumulative[i] = acc;
    }
  }

  double at(double t) const {
    const auto it = std::upper_bound(values.begin(), values.end(), t);
    if (it == values.begin()) return 0.0;
    return cumulative[static_cast<std::size_t>(it - values.begin()) - 1];
  }
};

}  // namespace

Eigen::VectorXd residuals(const SinogramData& data,
                          const Eigen::Ref<const Eigen::VectorXd>& trace) {
  data.validate();
  if (trace.size() != data.y.size())
    throw UsageError("residuals: trace length does not match the observations");
  return data.y - trace;
}

double weighted_ecdf(std::span<const double> res, std::span<const double> weights,
                     double t) {
  if (res.size() != weights.size()) throw UsageError("weighted_ecdf: size mismatch");
  double sum = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < res.size(); ++i) {
    sum += weights[i];
    if (res[i] <= t) acc += weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-9) throw UsageError("weights must sum to one");
  return acc;
}

Eigen::VectorXd weighted_ecdf_batch(const Eigen::Ref<const Eigen::VectorXd>& res,
                                    const Eigen::Ref<const Eigen::VectorXd>& weights,
                                    const Eigen::Ref<const Eigen::VectorXd>& t_grid) {
  if (res.size() != weights.size()) throw UsageError("weighted_ecdf_batch: size mismatch");
  require_probability_weights(weights);
  const SortedEcdf ecdf(res, weights);
  Eigen::VectorXd out(t_grid.size());
  for (Eigen::Index i = 0; i < t_grid.size(); ++i) out[i] = ecdf.at(t_grid[i]);
  return out;
}

EmpiricalProcessEval residual_process(const Eigen::Ref<const Eigen::VectorXd>& res,
                                      const Eigen::Ref<const Eigen::VectorXd>& weights,
                                      const ErrorLaw& law,
                                      const Eigen::Ref<const Eigen::VectorXd>& t_grid) {
  EmpiricalProcessEval eval;
  eval.t_grid = t_grid;
  eval.n = res.size();
  eval.f_hat = weighted_ecdf_batch(res, weights, t_grid);
  eval.process.resize(t_grid.size());
  const double root_n = std::sqrt(static_cast<double>(eval.n));
  for (Eigen::Index i = 0; i < t_grid.size(); ++i)
    eval.process[i] = root_n * (eval.f_hat[i] - law.cdf(t_grid[i]));
  return eval;
}

Eigen::VectorXd linearization_gap(const Eigen::Ref<const Eigen::VectorXd>& res,
                                  const Eigen::Ref<const Eigen::VectorXd>& raw_errors,
                                  const Eigen::Ref<const Eigen::VectorXd>& weights,
                                  const ErrorLaw& law,
                                  const Eigen::Ref<const Eigen::VectorXd>& t_grid) {
  if (raw_errors.size() != res.size())
    throw UsageError("linearization_gap: raw errors are required and must align");
  require_probability_weights(weights);
  const SortedEcdf est(res, weights);
  const SortedEcdf raw(raw_errors, weights);
  const double drift = weights.dot(raw_errors);  // sum w_k eps_k
  Eigen::VectorXd gap(t_grid.size());
  for (Eigen::Index i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    gap[i] = est.at(t) - raw.at(t) - drift * law.pdf(t);
  }
  return gap;
}

EmpiricalProcessEval residual_process(const Eigen::Ref<const Eigen::VectorXd>& res,
                                      const Eigen::Ref<const Eigen::VectorXd>& raw_errors,
                                      const Eigen::Ref<const Eigen::VectorXd>& weights,
                                      const ErrorLaw& law,
                                      const Eigen::Ref<const Eigen::VectorXd>& t_grid) {
  EmpiricalProcessEval eval = residual_process(res, weights, law, t_grid);
  eval.lin_gap = linearization_gap(res, raw_errors, weights, law, t_grid);
  return eval;
}

double covariance_kernel(double t, double tt, const ErrorLaw& law) {
  if (tt < t) std::swap(t, tt);  // canonical order makes symmetry bitwise
  const double f_t = law.pdf(t);
  const double f_tt = law.pdf(tt);
  const double bracket = law.cdf(std::min(t, tt)) - law.cdf(t) * law.cdf(tt) +
                         f_t * law.mean_below(tt) + f_tt * law.mean_below(t) +
                         law.variance() * f_t * f_tt;
  return (8.0 * kPi * kPi / 3.0) * bracket;
}

Eigen::MatrixXd covariance_kernel_matrix(const Eigen::Ref<const Eigen::VectorXd>& t_grid,
                                         const ErrorLaw& law) {
  Eigen::MatrixXd out(t_grid.size(), t_grid.size());
  for (Eigen::Index i = 0; i < t_grid.size(); ++i)
    for (Eigen::Index j = i; j < t_grid.size(); ++j)
      out(i, j) = out(j, i) = covariance_kernel(t_grid[i], t_grid[j], law);
  return out;
}

Eigen::VectorXd default_t_grid(const ErrorLaw& law, int points, double lo_q, double hi_q) {
  if (points < 2) throw UsageError("default_t_grid: need at least 2 points");
  if (!(0.0 < lo_q && lo_q < hi_q && hi_q < 1.0))
    throw UsageError("default_t_grid: quantile bounds out of order");
  const double lo = law.quantile(lo_q);
  const double hi = law.quantile(hi_q);
  Eigen::VectorXd grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  return grid;
}

}  // namespace rspec
