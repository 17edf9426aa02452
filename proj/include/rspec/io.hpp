#pragma once

#include <iosfwd>

#include "json.hpp"
#include "rspec/experiment.hpp"

namespace rspec {

/// Version tag written as the first comment line of every CSV file.
inline constexpr const char* kCsvVersionTag = "# radon-spectral v1";

/// Shortest-exact decimal form of a double (stable across runs and threads).
std::string format_double(double value);

void write_grid_csv(std::ostream& os, const DesignGrid& grid);

void write_sinogram_csv(std::ostream& os, const SinogramData& data);

/// Parses a sinogram CSV, rebuilds the design grid from the (k1, k2) extent
/// and verifies the stored coordinates and weights against it.
SinogramData read_sinogram_csv(std::istream& is);

void write_reconstruction_csv(std::ostream& os,
                              const Eigen::Ref<const Eigen::VectorXd>& r,
                              const Eigen::Ref<const Eigen::VectorXd>& theta,
                              const Eigen::Ref<const Eigen::VectorXd>& values);

void write_rate_study_csv(std::ostream& os, const RateStudyResult& result);

void write_residual_process_csv(std::ostream& os, const ResidualProcessResult& result);

/// Full covariance-check report (matrices, grid, entrywise comparison and
/// run metadata) as JSON.
nlohmann::json covariance_report(const CovarianceStudyResult& result,
                                 const ExperimentConfig& cfg);

/// Experiment configuration from JSON; missing keys keep their defaults.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);

/// Reconstruction settings: {"t": int | "auto", "v": ..., "scale": ...,
/// "filter": "hard" | "smooth"}.
struct ReconstructSettings {
  std::optional<int> fixed_t;
  BandwidthRule rule;
  FilterSpec filter = FilterSpec::hard();
};

ReconstructSettings parse_reconstruct_settings(const nlohmann::json& j);

}  // namespace rspec
