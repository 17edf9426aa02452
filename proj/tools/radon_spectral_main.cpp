// radon-spectral: simulation and reconstruction harness for the disc
// transform model. Subcommands: grid, simulate, reconstruct,
// residual-process, rate-study, covariance-check, selfcheck.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "rspec/basis.hpp"
#include "rspec/io.hpp"
#include "rspec/quadrature.hpp"
#include "rspec/radon.hpp"

namespace {

using namespace rspec;

std::filesystem::path resolve_output(const std::string& given,
                                     const std::string& default_name) {
  if (!given.empty()) return given;
  if (const char* dir = std::getenv("RADON_SPECTRAL_OUTDIR"))
    return std::filesystem::path(dir) / default_name;
  return default_name;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw UsageError("cannot open output file " + path.string());
  return os;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot open config file " + path);
  nlohmann::json j;
  is >> j;
  return j;
}

ExperimentConfig config_from_option(const std::string& path) {
  if (path.empty()) return {};
  return parse_experiment_config(load_json(path));
}

int warn_if_degenerate_bandwidth(int t) {
  if (t == 1)
    std::cerr << "warning: bandwidth rule selected t = 1 (the rule grows very "
                 "slowly; consider a fixed t or a larger scale)\n";
  return t;
}

// --- selfcheck ------------------------------------------------------------

bool check_svd_identity(std::ostream& os) {
  const auto indices = index_set(6);
  double worst = 0.0;
  for (double s : {0.15, 0.45, 0.75, 0.95}) {
    for (double phi : {0.3, 2.1, 4.4}) {
      const DetectorPoint z{s, phi};
      for (const BasisIndex& idx : indices) {
        FieldFunction re_part{[idx](const BrainPoint& p) { return zernike_phi(idx, p).real(); }, {}};
        FieldFunction im_part{[idx](const BrainPoint& p) { return zernike_phi(idx, p).imag(); }, {}};
        const Complex lhs{radon_line_integral(re_part, z, 64),
                          radon_line_integral(im_part, z, 64)};
        const Complex rhs = psi(idx, z) / std::sqrt(static_cast<double>(idx.m + 1));
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  const bool ok = worst <= 1e-6;
  os << (ok ? "[pass]" : "[FAIL]") << " svd identity (m <= 6): max deviation "
     << format_double(worst) << "\n";
  return ok;
}

bool check_orthonormality(std::ostream& os) {
  const auto indices = index_set(6);
  const Eigen::Index j_count = static_cast<Eigen::Index>(indices.size());
  const auto& rule = gauss_legendre(80);
  const int n_ang = 64;

  double worst = 0.0;
  {  // disc side, measure (1/pi) r dr dtheta
    Eigen::VectorXd r(rule.nodes.size() * n_ang), th(r.size()), w(r.size());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
      for (int a = 0; a < n_ang; ++a, ++k) {
        const double rr = 0.5 * (rule.nodes[i] + 1.0);
        r[k] = rr;
        th[k] = kTwoPi * a / n_ang;
        w[k] = 0.5 * rule.weights[i] * rr * (1.0 / kPi) * (kTwoPi / n_ang);
      }
    const Eigen::MatrixXcd basis = zernike_matrix(r, th, indices);
    const Eigen::MatrixXcd gram = basis.adjoint() * w.asDiagonal() * basis;
    worst = (gram - Eigen::MatrixXcd::Identity(j_count, j_count)).cwiseAbs().maxCoeff();
  }
  double worst_det = 0.0;
  {  // detector side through s = sin(alpha), measure (2/pi^2) sqrt(1-s^2) ds dphi
    Eigen::VectorXd s(rule.nodes.size() * n_ang), ph(s.size()), w(s.size());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
      for (int a = 0; a < n_ang; ++a, ++k) {
        const double alpha = 0.25 * kPi * (rule.nodes[i] + 1.0);
        const double c = std::cos(alpha);
        s[k] = std::sin(alpha);
        ph[k] = kTwoPi * a / n_ang;
        w[k] = 0.25 * kPi * rule.weights[i] * c * c * (2.0 / (kPi * kPi)) *
               (kTwoPi / n_ang);
      }
    const Eigen::MatrixXcd basis = psi_matrix(s, ph, indices);
    const Eigen::MatrixXcd gram = basis.adjoint() * w.asDiagonal() * basis;
    worst_det =
        (gram - Eigen::MatrixXcd::Identity(j_count, j_count)).cwiseAbs().maxCoeff();
  }
  const bool ok = worst <= 1e-8 && worst_det <= 1e-8;
  os << (ok ? "[pass]" : "[FAIL]") << " orthonormality (m <= 6): disc "
     << format_double(worst) << ", detector " << format_double(worst_det) << "\n";
  return ok;
}

bool check_design(std::ostream& os) {
  const DesignGrid grid = DesignGrid::build(16);
  const double sum = grid.weights().sum();
  const double max_w = grid.weights().maxCoeff();
  const double bound = 4.0 / (kPi * static_cast<double>(grid.n()));
  const bool ok = std::abs(sum - 1.0) <= 1e-12 && max_w <= bound + 1e-15;
  os << (ok ? "[pass]" : "[FAIL]") << " design weights (q=16): sum-1 = "
     << format_double(sum - 1.0) << ", max w / bound = " << format_double(max_w / bound)
     << "\n";
  return ok;
}

int run_selfcheck() {
  bool ok = true;
  ok &= check_svd_identity(std::cout);
  ok &= check_orthonormality(std::cout);
  ok &= check_design(std::cout);
  std::cout << (ok ? "selfcheck passed" : "selfcheck FAILED") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral reconstruction and residual diagnostics for the disc transform"};
  app.require_subcommand(1);

  // grid
  auto* cmd_grid = app.add_subcommand("grid", "write the design grid as CSV");
  int grid_q = 16;
  double grid_ratio = kTwoPi;
  std::string grid_out;
  cmd_grid->add_option("--q", grid_q, "radial column count")->check(CLI::PositiveNumber);
  cmd_grid->add_option("--ratio", grid_ratio, "angular rows per radial column");
  cmd_grid->add_option("-o,--output", grid_out, "output path");

  // simulate
  auto* cmd_sim = app.add_subcommand("simulate", "generate synthetic observations");
  std::string sim_cfg, sim_out;
  int sim_q = 0;
  std::uint64_t sim_seed = 0;
  cmd_sim->add_option("--config", sim_cfg, "experiment config JSON");
  cmd_sim->add_option("--q", sim_q, "override radial column count");
  auto* sim_seed_opt = cmd_sim->add_option("--seed", sim_seed, "override the seed");
  cmd_sim->add_option("-o,--output", sim_out, "output path");

  // reconstruct
  auto* cmd_rec = app.add_subcommand("reconstruct", "estimate the profile from a sinogram");
  std::string rec_in, rec_cfg, rec_out;
  int rec_nr = 50, rec_ntheta = 50;
  double rec_rmax = 0.99;
  cmd_rec->add_option("-i,--input", rec_in, "sinogram CSV")->required();
  cmd_rec->add_option("--config", rec_cfg, "reconstruction settings JSON");
  cmd_rec->add_option("--nr", rec_nr, "radial points of the output grid");
  cmd_rec->add_option("--ntheta", rec_ntheta, "angular points of the output grid");
  cmd_rec->add_option("--r-max", rec_rmax, "outer radius of the output grid");
  cmd_rec->add_option("-o,--output", rec_out, "output path");

  // residual-process
  auto* cmd_res = app.add_subcommand("residual-process",
                                     "weighted residual ECDF, process and gap on a grid");
  std::string res_cfg, res_out;
  cmd_res->add_option("--config", res_cfg, "experiment config JSON");
  cmd_res->add_option("-o,--output", res_out, "output path");

  // rate-study
  auto* cmd_rate = app.add_subcommand("rate-study", "sup-error medians across q");
  std::string rate_cfg, rate_out;
  int rate_threads = 0;
  cmd_rate->add_option("--config", rate_cfg, "experiment config JSON");
  cmd_rate->add_option("--threads", rate_threads, "worker threads");
  cmd_rate->add_option("-o,--output", rate_out, "output path");

  // covariance-check
  auto* cmd_cov = app.add_subcommand("covariance-check",
                                     "process covariance against the limit kernel");
  std::string cov_cfg, cov_out;
  int cov_threads = 0;
  cmd_cov->add_option("--config", cov_cfg, "experiment config JSON");
  cmd_cov->add_option("--threads", cov_threads, "worker threads");
  cmd_cov->add_option("-o,--output", cov_out, "output path");

  auto* cmd_self = app.add_subcommand("selfcheck", "run the built-in consistency suites");
  (void)cmd_self;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_grid->parsed()) {
      const DesignGrid grid = DesignGrid::build(grid_q, grid_ratio);
      auto os = open_output(resolve_output(grid_out, "grid.csv"));
      write_grid_csv(os, grid);
      return 0;
    }

    if (cmd_sim->parsed()) {
      ExperimentConfig cfg = config_from_option(sim_cfg);
      if (sim_q > 0) cfg.q_list = {sim_q};
      if (sim_seed_opt->count() > 0) cfg.base_seed = sim_seed;
      if (cfg.q_list.empty()) throw UsageError("simulate: no q given");
      std::cout << "phantom " << cfg.phantom.id()
                << ": smoothness sum = " << format_double(cfg.phantom.smoothness_sum())
                << "\n";
      const auto grid = make_grid(cfg.q_list.front(), cfg.ratio);
      const SinogramData data = generate_data(cfg.phantom, grid, cfg.law, cfg.base_seed);
      auto os = open_output(resolve_output(sim_out, "sinogram.csv"));
      write_sinogram_csv(os, data);
      return 0;
    }

    if (cmd_rec->parsed()) {
      std::ifstream is(rec_in);
      if (!is) throw UsageError("cannot open sinogram file " + rec_in);
      const SinogramData data = read_sinogram_csv(is);
      ReconstructSettings settings;
      if (!rec_cfg.empty()) settings = parse_reconstruct_settings(load_json(rec_cfg));
      const int t = settings.fixed_t
                        ? *settings.fixed_t
                        : warn_if_degenerate_bandwidth(
                              default_bandwidth(data.y.size(), settings.rule));
      const PolarGrid grid = PolarGrid::make(rec_nr, rec_ntheta, rec_rmax);
      std::vector<BrainPoint> points(static_cast<std::size_t>(grid.r.size()));
      for (Eigen::Index k = 0; k < grid.r.size(); ++k)
        points[static_cast<std::size_t>(k)] = {grid.r[k], grid.theta[k]};
      const std::vector<double> values = estimate_at(data, t, settings.filter, points);
      auto os = open_output(resolve_output(rec_out, "reconstruction.csv"));
      write_reconstruction_csv(
          os, grid.r, grid.theta,
          Eigen::Map<const Eigen::VectorXd>(values.data(),
                                            static_cast<Eigen::Index>(values.size())));
      return 0;
    }

    if (cmd_res->parsed()) {
      ExperimentConfig cfg = config_from_option(res_cfg);
      if (!cfg.law.full_support())
        std::cerr << "note: the error law has bounded support; the t grid is "
                     "restricted to the interior of the support\n";
      const ResidualProcessResult result = residual_process_study(cfg);
      auto os = open_output(resolve_output(res_out, "residual_process.csv"));
      write_residual_process_csv(os, result);
      const double scaled_sup =
          std::sqrt(static_cast<double>(result.eval.n)) *
          result.eval.lin_gap.cwiseAbs().maxCoeff();
      std::cout << "sqrt(n) sup |lin gap| = " << format_double(scaled_sup) << "\n";
      return 0;
    }

    if (cmd_rate->parsed()) {
      ExperimentConfig cfg = config_from_option(rate_cfg);
      if (rate_threads > 0) cfg.threads = rate_threads;
      const RateStudyResult result = rate_study(cfg);
      auto os = open_output(resolve_output(rate_out, "rate_study.csv"));
      write_rate_study_csv(os, result);
      if (result.rows.size() >= 2)
        std::cout << "loglog slope: " << format_double(result.loglog_slope) << "\n";
      return 0;
    }

    if (cmd_cov->parsed()) {
      ExperimentConfig cfg = config_from_option(cov_cfg);
      if (cov_threads > 0) cfg.threads = cov_threads;
      if (cfg.t_grid.points == 41 && !cfg.t_grid.explicit_points)
        cfg.t_grid.points = 5;  // covariance matrices default to a 5-point grid
      const CovarianceStudyResult result = covariance_study(cfg);
      const nlohmann::json report = covariance_report(result, cfg);
      auto os = open_output(resolve_output(cov_out, "covariance_check.json"));
      os << report.dump(2) << "\n";
      return 0;
    }

    if (cmd_self->parsed()) return run_selfcheck();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
