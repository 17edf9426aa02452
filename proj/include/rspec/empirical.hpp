#pragma once

#include <span>

#include "rspec/error_law.hpp"
#include "rspec/estimator.hpp"

namespace rspec {

/// Residuals eps_hat_k = Y_k - (transformed estimate at z_k).
Eigen::VectorXd residuals(const SinogramData& data,
                          const Eigen::Ref<const Eigen::VectorXd>& trace);

/// Weighted empirical distribution function sum_k w_k 1{res_k <= t}
/// (right-continuous, ties included). Weights must sum to one.
double weighted_ecdf(std::span<const double> res, std::span<const double> weights,
                     double t);

/// Batch evaluation on an ascending t grid: sorts once, then sweeps.
Eigen::VectorXd weighted_ecdf_batch(const Eigen::Ref<const Eigen::VectorXd>& res,
                                    const Eigen::Ref<const Eigen::VectorXd>& weights,
                                    const Eigen::Ref<const Eigen::VectorXd>& t_grid);

/// Evaluation of the weighted residual ECDF and the scaled process
/// sqrt(n) (F_hat(t) - F(t)) on a grid; lin_gap is filled only by the
/// simulation-side overload that sees the true errors.
struct EmpiricalProcessEval {
  Eigen::VectorXd t_grid;
  Eigen::VectorXd f_hat;
  Eigen::VectorXd process;
  Eigen::VectorXd lin_gap;
  Eigen::Index n = 0;
};

EmpiricalProcessEval residual_process(const Eigen::Ref<const Eigen::VectorXd>& res,
                                      const Eigen::Ref<const Eigen::VectorXd>& weights,
                                      const ErrorLaw& law,
                                      const Eigen::Ref<const Eigen::VectorXd>& t_grid);

/// Per-t value of sum_k w_k [1{res_k <= t} - 1{raw_k <= t} - raw_k f(t)].
/// Simulation-only: requires the generating errors.
Eigen::VectorXd linearization_gap(const Eigen::Ref<const Eigen::VectorXd>& res,
                                  const Eigen::Ref<const Eigen::VectorXd>& raw_errors,
                                  const Eigen::Ref<const Eigen::VectorXd>& weights,
                                  const ErrorLaw& law,
                                  const Eigen::Ref<const Eigen::VectorXd>& t_grid);

/// residual_process plus the linearization gap.
EmpiricalProcessEval residual_process(const Eigen::Ref<const Eigen::VectorXd>& res,
                                      const Eigen::Ref<const Eigen::VectorXd>& raw_errors,
                                      const Eigen::Ref<const Eigen::VectorXd>& weights,
                                      const ErrorLaw& law,
                                      const Eigen::Ref<const Eigen::VectorXd>& t_grid);

/// Limit covariance of the residual process:
/// (8 pi^2 / 3) (F(min) - F(t) F(tt) + f(t) E[eps 1{eps <= tt}]
///               + f(tt) E[eps 1{eps <= t}] + var f(t) f(tt)).
double covariance_kernel(double t, double tt, const ErrorLaw& law);

/// Gram matrix of the kernel on a grid (symmetric, positive semidefinite).
Eigen::MatrixXd covariance_kernel_matrix(const Eigen::Ref<const Eigen::VectorXd>& t_grid,
                                         const ErrorLaw& law);

/// Default evaluation grid: `points` equispaced values spanning the central
/// [lo_q, hi_q] quantile range of the law.
Eigen::VectorXd default_t_grid(const ErrorLaw& law, int points = 41,
                               double lo_q = 0.005, double hi_q = 0.995);

}  // namespace rspec
