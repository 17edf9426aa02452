#pragma once

#include <optional>

#include "rspec/simulate.hpp"

namespace rspec {

/// Polar evaluation grid for sup-norm errors. The radial range stops short of
/// the boundary, where the oscillation of high-degree basis functions peaks.
struct PolarGrid {
  Eigen::VectorXd r;      // flattened, size nr * ntheta
  Eigen::VectorXd theta;

  static PolarGrid make(int nr = 50, int ntheta = 50, double r_max = 0.99);
};

/// Sup distance between two expansions on a polar grid.
double sup_error_on_grid(const CoefficientField& estimate, const CoefficientField& truth,
                         const PolarGrid& grid);

struct TGridSpec {
  int points = 41;
  double lo_q = 0.005, hi_q = 0.995;
  std::optional<Eigen::VectorXd> explicit_points;

  Eigen::VectorXd resolve(const ErrorLaw& law) const;
};

struct ExperimentConfig {
  std::vector<int> q_list{16, 32, 64};
  double ratio = kTwoPi;
  PhantomSpec phantom = PhantomSpec::decaying(5.0, 1.0, 12, 2026);
  ErrorLaw law = ErrorLaw::gaussian(0.5);
  std::optional<int> fixed_t;        // overrides the rule when set
  bool oracle_t = false;             // simulation-only selector
  BandwidthRule rule;
  FilterSpec filter = FilterSpec::hard();
  int replications = 50;
  std::uint64_t base_seed = 20260801;
  TGridSpec t_grid;
  int threads = 1;
  PolarGrid eval_grid = PolarGrid::make();

  int bandwidth_for(Eigen::Index n) const;
};

/// Deterministic parallel map: task i runs on thread i mod threads, results
/// keyed by i, so the output is independent of the thread count.
void parallel_for(int tasks, int threads, const std::function<void(int)>& body);

// ---------------------------------------------------------------------------

struct RateStudyRow {
  int q = 0;
  Eigen::Index n = 0;
  int t = 0;
  double median_sup_error = 0.0;
  double iqr = 0.0;
};

struct RateStudyResult {
  std::vector<RateStudyRow> rows;
  double loglog_slope = 0.0;  // LS fit of log median error against log n
};

/// Per q: median and IQR over replications of the sup-grid estimation error.
RateStudyResult rate_study(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------

struct CovarianceStudyResult {
  Eigen::VectorXd t_grid;
  Eigen::MatrixXd empirical;    // sample covariance of the process over reps
  Eigen::MatrixXd theoretical;  // covariance_kernel on the grid
  Eigen::MatrixXd mc_se;        // Monte Carlo standard error per entry
  int q = 0;
  Eigen::Index n = 0;
  int t = 0;
  int replications = 0;
};

/// Covariance of the residual process at the t grid vs the kernel, at the
/// first (or only) q of the config.
CovarianceStudyResult covariance_study(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------

struct LinearizationStudyRow {
  int q = 0;
  Eigen::Index n = 0;
  double median_scaled_sup_gap = 0.0;  // median of sqrt(n) sup_t |gap|
};

/// Per q: median over replications of sqrt(n) sup_t |linearization gap|.
std::vector<LinearizationStudyRow> linearization_study(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------

struct ResidualProcessResult {
  EmpiricalProcessEval eval;
  Eigen::VectorXd sigma_diag;  // covariance kernel diagonal on the t grid
  int q = 0;
  int t = 0;
};

/// One simulated data set at the first q of the config, with process,
/// linearization gap and kernel diagonal on the t grid.
ResidualProcessResult residual_process_study(const ExperimentConfig& cfg);

}  // namespace rspec
