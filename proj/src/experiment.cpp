#include "rspec/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include "rspec/basis.hpp"
#include "rspec/radon.hpp"

namespace rspec {

PolarGrid PolarGrid::make(int nr, int ntheta, double r_max) {
  if (nr < 1 || ntheta < 1) throw UsageError("PolarGrid: need at least one point per axis");
  if (!(r_max > 0.0 && r_max <= 1.0)) throw UsageError("PolarGrid: r_max out of (0, 1]");
  PolarGrid g;
  g.r.resize(static_cast<Eigen::Index>(nr) * ntheta);
  g.theta.resize(g.r.size());
  Eigen::Index k = 0;
  for (int i = 0; i < nr; ++i) {
    const double r = nr == 1 ? 0.0 : r_max * i / (nr - 1);
    for (int j = 0; j < ntheta; ++j, ++k) {
      g.r[k] = r;
      g.theta[k] = kTwoPi * j / ntheta;
    }
  }
  return g;
}

double sup_error_on_grid(const CoefficientField& estimate, const CoefficientField& truth,
                         const PolarGrid& grid) {
  require_tag(estimate, SpaceTag::brain, "sup_error_on_grid");
  require_tag(truth, SpaceTag::brain, "sup_error_on_grid");
  // Difference field: shared indices collapse, so the scan is one pass.
  CoefficientField diff = estimate;
  for (const auto& [idx, v] : truth) diff.add(idx, -v);
  std::vector<BasisIndex> indices;
  Eigen::VectorXcd coeffs(static_cast<Eigen::Index>(diff.size()));
  Eigen::Index j = 0;
  for (const auto& [idx, v] : diff) {
    indices.push_back(idx);
    coeffs[j++] = v;
  }
  if (indices.empty()) return 0.0;
  const Eigen::VectorXcd values = zernike_matrix(grid.r, grid.theta, indices) * coeffs;
  return values.cwiseAbs().maxCoeff();
}

Eigen::VectorXd TGridSpec::resolve(const ErrorLaw& law) const {
  if (explicit_points) {
    if (explicit_points->size() < 1) throw UsageError("TGridSpec: empty grid");
    return *explicit_points;
  }
  return default_t_grid(law, points, lo_q, hi_q);
}

int ExperimentConfig::bandwidth_for(Eigen::Index n) const {
  if (fixed_t) {
    if (*fixed_t < 1 || *fixed_t > kDefaultDegreeCap)
      throw UsageError("ExperimentConfig: fixed bandwidth out of range");
    return *fixed_t;
  }
  return default_bandwidth(n, rule);
}

void parallel_for(int tasks, int threads, const std::function<void(int)>& body) {
  if (tasks <= 0) return;
  threads = std::max(1, std::min(threads, tasks));
  if (threads == 1) {
    for (int i = 0; i < tasks; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mtx;
  pool.reserve(threads);
  for (int tid = 0; tid < threads; ++tid) {
    pool.emplace_back([&, tid] {
      try {
        for (int i = tid; i < tasks; i += threads) body(i);
      } catch (...) {
        std::lock_guard lock(error_mtx);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Interquartile range with linear interpolation between order statistics.
double quantile_of(std::vector<double> v, double prob) {
  std::sort(v.begin(), v.end());
  const double pos = prob * (v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

// Replication engine: precomputes everything that does not depend on the
// noise (grid, noise-free trace, detector basis up to the bandwidth), then
// maps replications to estimated fields.
struct ReplicationPlan {
  DesignGridPtr grid;
  Eigen::VectorXd trace;
  int t = 0;
  std::vector<BasisIndex> indices;
  Eigen::MatrixXcd psi_design;   // n x J detector basis at the design points
  Eigen::VectorXcd filter_scale; // sqrt(m+1) Lambda(m/t) per index

  ReplicationPlan(const ExperimentConfig& cfg, int q) {
    grid = make_grid(q, cfg.ratio);
    trace = phantom_radon_trace(cfg.phantom, *grid);
    t = cfg.bandwidth_for(grid->n());
    const FilterSpec& filter = cfg.filter;
    const int m_max = std::min<int>(
        kDefaultDegreeCap, static_cast<int>(std::floor(t * filter.support_end + 1e-9)));
    for (const BasisIndex& idx : index_set(m_max))
      if (filter.weight(static_cast<double>(idx.m) / t) > 0.0) indices.push_back(idx);
    psi_design = psi_matrix(grid->s(), grid->phi(), indices);
    filter_scale.resize(static_cast<Eigen::Index>(indices.size()));
    for (std::size_t j = 0; j < indices.size(); ++j) {
      const BasisIndex idx = indices[j];
      filter_scale[static_cast<Eigen::Index>(j)] =
          std::sqrt(static_cast<double>(idx.m + 1)) *
          filter.weight(static_cast<double>(idx.m) / t);
    }
  }

  Eigen::VectorXd draw_errors(const ExperimentConfig& cfg, int rep) const {
    Rng rng = Rng::replication_stream(cfg.base_seed, static_cast<std::uint64_t>(rep));
    Eigen::VectorXd eps(grid->n());
    for (Eigen::Index k = 0; k < eps.size(); ++k) eps[k] = cfg.law.sample(rng);
    return eps;
  }

  /// Filtered brain-space coefficients for observations y.
  Eigen::VectorXcd estimate(const Eigen::VectorXd& y) const {
    const Eigen::VectorXd wy = grid->weights().cwiseProduct(y);
    Eigen::VectorXcd raw = psi_design.adjoint() * wy.cast<Complex>();
    return filter_scale.cwiseProduct(raw);
  }

  /// Transformed estimate at the design points.
  Eigen::VectorXd trace_of(const Eigen::VectorXcd& coeffs) const {
    Eigen::VectorXcd detector(coeffs.size());
    for (std::size_t j = 0; j < indices.size(); ++j)
      detector[static_cast<Eigen::Index>(j)] =
          coeffs[static_cast<Eigen::Index>(j)] /
          std::sqrt(static_cast<double>(indices[j].m + 1));
    return (psi_design * detector).real();
  }
};

}  // namespace

RateStudyResult rate_study(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) throw UsageError("rate_study: need replications >= 1");
  RateStudyResult result;
  for (int q : cfg.q_list) {
    const ReplicationPlan plan(cfg, q);
    // Oracle bandwidth selection re-plans with the chosen t. Past the phantom
    // degree the sup-error can only pick up noise, so the search stops a
    // little above it.
    std::optional<ReplicationPlan> oracle_plan;
    if (cfg.oracle_t) {
      SinogramData probe{plan.grid, plan.trace + plan.draw_errors(cfg, 0),
                         {cfg.base_seed, cfg.law.describe(), cfg.phantom.id()}};
      const int t_max = std::min(kDefaultDegreeCap,
                                 std::max(1, cfg.phantom.max_degree() + 2));
      ExperimentConfig picked = cfg;
      picked.fixed_t = oracle_bandwidth(probe, cfg.phantom.coefficients(), cfg.filter,
                                        t_max, cfg.eval_grid.r, cfg.eval_grid.theta);
      picked.oracle_t = false;
      oracle_plan.emplace(picked, q);
    }
    const ReplicationPlan& active = oracle_plan ? *oracle_plan : plan;

    // Evaluation operator on the grid, restricted to the estimated indices.
    const Eigen::MatrixXcd phi_grid =
        zernike_matrix(cfg.eval_grid.r, cfg.eval_grid.theta, active.indices);
    Eigen::VectorXd truth(cfg.eval_grid.r.size());
    for (Eigen::Index k = 0; k < truth.size(); ++k)
      truth[k] = cfg.phantom.evaluate({cfg.eval_grid.r[k], cfg.eval_grid.theta[k]});

    std::vector<double> errors(static_cast<std::size_t>(cfg.replications));
    parallel_for(cfg.replications, cfg.threads, [&](int rep) {
      const Eigen::VectorXd y = active.trace + active.draw_errors(cfg, rep);
      const Eigen::VectorXcd coeffs = active.estimate(y);
      const Eigen::VectorXd values = (phi_grid * coeffs).real();
      errors[static_cast<std::size_t>(rep)] = (values - truth).cwiseAbs().maxCoeff();
    });

    RateStudyRow row;
    row.q = q;
    row.n = active.grid->n();
    row.t = active.t;
    row.median_sup_error = median_of(errors);
    row.iqr = quantile_of(errors, 0.75) - quantile_of(errors, 0.25);
    result.rows.push_back(row);
  }

  if (result.rows.size() >= 2) {
    // Least-squares slope of log(median) against log(n).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double cnt = static_cast<double>(result.rows.size());
    for (const auto& row : result.rows) {
      const double x = std::log(static_cast<double>(row.n));
      const double y = std::log(row.median_sup_error);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    result.loglog_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  }
  return result;
}

CovarianceStudyResult covariance_study(const ExperimentConfig& cfg) {
  if (cfg.q_list.empty()) throw UsageError("covariance_study: empty q list");
  if (cfg.replications < 2) throw UsageError("covariance_study: need replications >= 2");
  const int q = cfg.q_list.front();
  const ReplicationPlan plan(cfg, q);
  const Eigen::VectorXd t_grid = cfg.t_grid.resolve(cfg.law);
  const Eigen::Index g = t_grid.size();
  const int reps = cfg.replications;

  Eigen::MatrixXd process_values(reps, g);
  parallel_for(reps, cfg.threads, [&](int rep) {
    const Eigen::VectorXd eps = plan.draw_errors(cfg, rep);
    const Eigen::VectorXd y = plan.trace + eps;
    const Eigen::VectorXd trace_hat = plan.trace_of(plan.estimate(y));
    const Eigen::VectorXd res = y - trace_hat;
    const EmpiricalProcessEval eval =
        residual_process(res, plan.grid->weights(), cfg.law, t_grid);
    process_values.row(rep) = eval.process.transpose();
  });

  CovarianceStudyResult out;
  out.t_grid = t_grid;
  out.q = q;
  out.n = plan.grid->n();
  out.t = plan.t;
  out.replications = reps;
  const Eigen::RowVectorXd mean = process_values.colwise().mean();
  const Eigen::MatrixXd centred = process_values.rowwise() - mean;
  out.empirical = centred.transpose() * centred / static_cast<double>(reps - 1);
  out.theoretical = covariance_kernel_matrix(t_grid, cfg.law);

  // Standard error of each covariance entry from the replication spread of
  // the centred products.
  out.mc_se.resize(g, g);
  for (Eigen::Index i = 0; i < g; ++i)
    for (Eigen::Index j = 0; j < g; ++j) {
      const Eigen::ArrayXd prod = centred.col(i).array() * centred.col(j).array();
      const double m = prod.mean();
      const double var = (prod - m).square().sum() / static_cast<double>(reps - 1);
      out.mc_se(i, j) = std::sqrt(var / static_cast<double>(reps));
    }
  return out;
}

std::vector<LinearizationStudyRow> linearization_study(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) throw UsageError("linearization_study: need replications >= 1");
  std::vector<LinearizationStudyRow> rows;
  for (int q : cfg.q_list) {
    const ReplicationPlan plan(cfg, q);
    const Eigen::VectorXd t_grid = cfg.t_grid.resolve(cfg.law);
    std::vector<double> scaled(static_cast<std::size_t>(cfg.replications));
    parallel_for(cfg.replications, cfg.threads, [&](int rep) {
      const Eigen::VectorXd eps = plan.draw_errors(cfg, rep);
      const Eigen::VectorXd y = plan.trace + eps;
      const Eigen::VectorXd trace_hat = plan.trace_of(plan.estimate(y));
      const Eigen::VectorXd res = y - trace_hat;
      const Eigen::VectorXd gap =
          linearization_gap(res, eps, plan.grid->weights(), cfg.law, t_grid);
      scaled[static_cast<std::size_t>(rep)] =
          std::sqrt(static_cast<double>(plan.grid->n())) * gap.cwiseAbs().maxCoeff();
    });
    rows.push_back({q, plan.grid->n(), median_of(scaled)});
  }
  return rows;
}

ResidualProcessResult residual_process_study(const ExperimentConfig& cfg) {
  if (cfg.q_list.empty()) throw UsageError("residual_process_study: empty q list");
  const int q = cfg.q_list.front();
  const ReplicationPlan plan(cfg, q);
  const Eigen::VectorXd t_grid = cfg.t_grid.resolve(cfg.law);
  const Eigen::VectorXd eps = plan.draw_errors(cfg, 0);
  const Eigen::VectorXd y = plan.trace + eps;
  const Eigen::VectorXd trace_hat = plan.trace_of(plan.estimate(y));
  const Eigen::VectorXd res = y - trace_hat;

  ResidualProcessResult out;
  out.eval = residual_process(res, eps, plan.grid->weights(), cfg.law, t_grid);
  out.sigma_diag.resize(t_grid.size());
  for (Eigen::Index i = 0; i < t_grid.size(); ++i)
    out.sigma_diag[i] = covariance_kernel(t_grid[i], t_grid[i], cfg.law);
  out.q = q;
  out.t = plan.t;
  return out;
}

}  // namespace rspec
