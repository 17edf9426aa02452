#include "rspec/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace rspec {

std::string format_double(double value) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

void write_grid_csv(std::ostream& os, const DesignGrid& grid) {
  os << kCsvVersionTag << "\n";
  os << "k1,k2,s,phi,weight\n";
  for (int k1 = 0; k1 < grid.q(); ++k1)
    for (int k2 = 0; k2 < grid.p(); ++k2) {
      const Eigen::Index k = grid.linear_index(k1, k2);
      os << k1 << ',' << k2 << ',' << format_double(grid.s()[k]) << ','
         << format_double(grid.phi()[k]) << ',' << format_double(grid.weights()[k])
         << "\n";
    }
}

void write_sinogram_csv(std::ostream& os, const SinogramData& data) {
  data.validate();
  const DesignGrid& grid = *data.grid;
  os << kCsvVersionTag << "\n";
  os << "# meta seed=" << data.meta.seed << "\n";
  if (!data.meta.law.empty()) os << "# meta law=" << data.meta.law << "\n";
  if (!data.meta.phantom.empty()) os << "# meta phantom=" << data.meta.phantom << "\n";
  os << "k1,k2,s,phi,weight,y\n";
  for (int k1 = 0; k1 < grid.q(); ++k1)
    for (int k2 = 0; k2 < grid.p(); ++k2) {
      const Eigen::Index k = grid.linear_index(k1, k2);
      os << k1 << ',' << k2 << ',' << format_double(grid.s()[k]) << ','
         << format_double(grid.phi()[k]) << ',' << format_double(grid.weights()[k]) << ','
         << format_double(data.y[k]) << "\n";
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

double parse_double(const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == 0) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("malformed numeric field '" + text + "'");
  }
}

}  // namespace

SinogramData read_sinogram_csv(std::istream& is) {
  std::string line;
  SinogramMeta meta;
  struct Row {
    int k1, k2;
    double s, phi, w, y;
  };
  std::vector<Row> rows;
  bool header_seen = false;
  int q = 0, p = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string meta_prefix = "# meta ";
      if (line.rfind(meta_prefix, 0) == 0) {
        const std::string kv = line.substr(meta_prefix.size());
        const auto eq = kv.find('=');
        if (eq != std::string::npos) {
          const std::string key = kv.substr(0, eq);
          const std::string value = kv.substr(eq + 1);
          if (key == "seed") meta.seed = std::stoull(value);
          if (key == "law") meta.law = value;
          if (key == "phantom") meta.phantom = value;
        }
      }
      continue;
    }
    if (!header_seen) {
      if (line.rfind("k1,k2,s,phi,weight,y", 0) != 0)
        throw UsageError("sinogram CSV: unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 6) throw UsageError("sinogram CSV: expected 6 fields per row");
    Row row{};
    row.k1 = static_cast<int>(parse_double(fields[0]));
    row.k2 = static_cast<int>(parse_double(fields[1]));
    row.s = parse_double(fields[2]);
    row.phi = parse_double(fields[3]);
    row.w = parse_double(fields[4]);
    row.y = parse_double(fields[5]);
    q = std::max(q, row.k1 + 1);
    p = std::max(p, row.k2 + 1);
    rows.push_back(row);
  }
  if (rows.empty()) throw UsageError("sinogram CSV: no data rows");
  if (static_cast<Eigen::Index>(rows.size()) != static_cast<Eigen::Index>(q) * p)
    throw UsageError("sinogram CSV: incomplete grid (" + std::to_string(rows.size()) +
                     " rows for q=" + std::to_string(q) + ", p=" + std::to_string(p) + ")");

  auto grid = std::make_shared<const DesignGrid>(DesignGrid::build_pq(q, p));
  SinogramData data;
  data.grid = grid;
  data.y.resize(grid->n());
  data.meta = meta;
  Eigen::VectorXd seen = Eigen::VectorXd::Constant(grid->n(), 0.0);
  for (const Row& row : rows) {
    if (row.k1 < 0 || row.k1 >= q || row.k2 < 0 || row.k2 >= p)
      throw UsageError("sinogram CSV: cell index out of range");
    const Eigen::Index k = grid->linear_index(row.k1, row.k2);
    if (seen[k] != 0.0) throw UsageError("sinogram CSV: duplicate cell");
    seen[k] = 1.0;
    const double tol = 1e-9;
    if (std::abs(row.s - grid->s()[k]) > tol || std::abs(row.phi - grid->phi()[k]) > tol ||
        std::abs(row.w - grid->weights()[k]) > tol * std::max(1.0, grid->weights()[k]))
      throw ConsistencyError("sinogram CSV: stored design point disagrees with the grid");
    data.y[k] = row.y;
  }
  data.validate();
  return data;
}

void write_reconstruction_csv(std::ostream& os,
                              const Eigen::Ref<const Eigen::VectorXd>& r,
                              const Eigen::Ref<const Eigen::VectorXd>& theta,
                              const Eigen::Ref<const Eigen::VectorXd>& values) {
  if (r.size() != theta.size() || r.size() != values.size())
    throw UsageError("write_reconstruction_csv: size mismatch");
  os << kCsvVersionTag << "\n";
  os << "r,theta,g_hat\n";
  for (Eigen::Index k = 0; k < r.size(); ++k)
    os << format_double(r[k]) << ',' << format_double(theta[k]) << ','
       << format_double(values[k]) << "\n";
}

void write_rate_study_csv(std::ostream& os, const RateStudyResult& result) {
  os << kCsvVersionTag << "\n";
  if (result.rows.size() >= 2)
    os << "# loglog_slope=" << format_double(result.loglog_slope) << "\n";
  os << "q,n,t,median_sup_error,iqr\n";
  for (const auto& row : result.rows)
    os << row.q << ',' << row.n << ',' << row.t << ','
       << format_double(row.median_sup_error) << ',' << format_double(row.iqr) << "\n";
}

void write_residual_process_csv(std::ostream& os, const ResidualProcessResult& result) {
  os << kCsvVersionTag << "\n";
  os << "t,F_hat,process,lin_gap,sigma_kernel_diag\n";
  const auto& e = result.eval;
  for (Eigen::Index i = 0; i < e.t_grid.size(); ++i)
    os << format_double(e.t_grid[i]) << ',' << format_double(e.f_hat[i]) << ','
       << format_double(e.process[i]) << ','
       << format_double(e.lin_gap.size() ? e.lin_gap[i] : 0.0) << ','
       << format_double(result.sigma_diag[i]) << "\n";
}

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

nlohmann::json covariance_report(const CovarianceStudyResult& result,
                                 const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["format"] = "radon-spectral covariance-check v1";
  j["q"] = result.q;
  j["n"] = result.n;
  j["t"] = result.t;
  j["replications"] = result.replications;
  j["base_seed"] = cfg.base_seed;
  j["rng"] = Rng::algorithm();
  j["law"] = cfg.law.describe();
  j["phantom"] = cfg.phantom.id();
  j["filter"] = cfg.filter.name();
  j["t_grid"] = std::vector<double>(result.t_grid.begin(), result.t_grid.end());
  j["empirical"] = matrix_to_json(result.empirical);
  j["theoretical"] = matrix_to_json(result.theoretical);
  j["mc_se"] = matrix_to_json(result.mc_se);

  // Entrywise comparison at tolerance max(0.15 |Sigma|, 3 SE).
  int matches = 0;
  const Eigen::Index g = result.t_grid.size();
  nlohmann::json mismatches = nlohmann::json::array();
  for (Eigen::Index i = 0; i < g; ++i)
    for (Eigen::Index jj = 0; jj < g; ++jj) {
      const double tol = std::max(0.15 * std::abs(result.theoretical(i, jj)),
                                  3.0 * result.mc_se(i, jj));
      const double diff = std::abs(result.empirical(i, jj) - result.theoretical(i, jj));
      if (diff <= tol) {
        ++matches;
      } else {
        mismatches.push_back({{"i", i}, {"j", jj}, {"diff", diff}, {"tol", tol}});
      }
    }
  j["comparison"]["entries"] = g * g;
  j["comparison"]["within_tolerance"] = matches;
  j["comparison"]["mismatches"] = mismatches;
  // The empirical normalization n sum w_k^2 tends to 32/(3 pi^2); report the
  // implied ratio against the kernel constant for reference.
  const double fro_e = result.empirical.norm();
  const double fro_t = result.theoretical.norm();
  j["comparison"]["frobenius_ratio_empirical_over_theoretical"] =
      fro_t > 0.0 ? fro_e / fro_t : 0.0;
  return j;
}

namespace {

ErrorLaw parse_law(const nlohmann::json& j) {
  const std::string kind = j.value("kind", "gaussian");
  if (kind == "gaussian") return ErrorLaw::gaussian(j.value("sigma", 1.0));
  if (kind == "uniform") return ErrorLaw::uniform(j.value("a", -1.0), j.value("b", 1.0));
  if (kind == "student_t")
    return ErrorLaw::student_t(j.value("df", 5.0), j.value("scale", 1.0));
  throw UsageError("config: unknown error law '" + kind + "'");
}

PhantomSpec parse_phantom(const nlohmann::json& j) {
  const std::string kind = j.value("kind", "decaying");
  if (kind == "decaying") {
    return PhantomSpec::decaying(j.value("v", 5.0), j.value("amplitude", 1.0),
                                 j.value("max_degree", 12),
                                 j.value("seed", std::uint64_t{2026}));
  }
  if (kind == "finite") {
    std::vector<std::pair<BasisIndex, Complex>> entries;
    for (const auto& e : j.at("entries")) {
      entries.emplace_back(BasisIndex{e.at("l").get<int>(), e.at("m").get<int>()},
                           Complex{e.value("re", 0.0), e.value("im", 0.0)});
    }
    return PhantomSpec::finite(entries, j.value("v", 5.0));
  }
  throw UsageError("config: unknown phantom kind '" + kind + "'");
}

FilterSpec parse_filter(const nlohmann::json& j) {
  const std::string name = j.is_string() ? j.get<std::string>() : j.value("kind", "hard");
  if (name == "hard") return FilterSpec::hard();
  if (name == "smooth") return FilterSpec::smooth();
  throw UsageError("config: unknown filter '" + name + "'");
}

}  // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  if (j.contains("q_list")) cfg.q_list = j.at("q_list").get<std::vector<int>>();
  else if (j.contains("q")) cfg.q_list = {j.at("q").get<int>()};
  if (j.contains("ratio")) cfg.ratio = j.at("ratio").get<double>();
  if (j.contains("phantom")) cfg.phantom = parse_phantom(j.at("phantom"));
  if (j.contains("law")) cfg.law = parse_law(j.at("law"));
  if (j.contains("filter")) cfg.filter = parse_filter(j.at("filter"));
  if (j.contains("replications")) cfg.replications = j.at("replications").get<int>();
  if (j.contains("base_seed")) cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();

  if (j.contains("bandwidth")) {
    const auto& b = j.at("bandwidth");
    if (b.contains("t") && !b.at("t").is_string())
      cfg.fixed_t = b.at("t").get<int>();
    else if (b.contains("t") && b.at("t").get<std::string>() == "oracle")
      cfg.oracle_t = true;
    cfg.rule.v = b.value("v", 5.0);
    cfg.rule.scale = b.value("scale", 1.0);
  }

  if (j.contains("t_grid")) {
    const auto& t = j.at("t_grid");
    if (t.contains("points") && t.at("points").is_array()) {
      const auto pts = t.at("points").get<std::vector<double>>();
      cfg.t_grid.explicit_points =
          Eigen::Map<const Eigen::VectorXd>(pts.data(), static_cast<Eigen::Index>(pts.size()));
    } else {
      cfg.t_grid.points = t.value("points", 41);
      cfg.t_grid.lo_q = t.value("lo_q", 0.005);
      cfg.t_grid.hi_q = t.value("hi_q", 0.995);
    }
  }

  if (j.contains("eval_grid")) {
    const auto& e = j.at("eval_grid");
    cfg.eval_grid = PolarGrid::make(e.value("nr", 50), e.value("ntheta", 50),
                                    e.value("r_max", 0.99));
  }
  return cfg;
}

ReconstructSettings parse_reconstruct_settings(const nlohmann::json& j) {
  ReconstructSettings s;
  if (j.contains("t") && !j.at("t").is_string()) s.fixed_t = j.at("t").get<int>();
  s.rule.v = j.value("v", 5.0);
  s.rule.scale = j.value("scale", 1.0);
  if (j.contains("filter")) s.filter = parse_filter(j.at("filter"));
  return s;
}

}  // namespace rspec
