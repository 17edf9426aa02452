#include "rspec/simulate.hpp"

#include "rspec/basis.hpp"
#include "rspec/radon.hpp"

namespace rspec {

Eigen::VectorXd phantom_radon_trace(const PhantomSpec& phantom, const DesignGrid& grid) {
  const CoefficientField detector = svd_forward(phantom.coefficients());
  if (detector.empty()) return Eigen::VectorXd::Zero(grid.n());
  std::vector<BasisIndex> indices;
  Eigen::VectorXcd coeffs(static_cast<Eigen::Index>(detector.size()));
  Eigen::Index j = 0;
  for (const auto& [idx, v] : detector) {
    indices.push_back(idx);
    coeffs[j++] = v;
  }
  const Eigen::VectorXcd values = psi_matrix(grid.s(), grid.phi(), indices) * coeffs;
  return values.real();
}

SimulatedDraw generate_draw(const PhantomSpec& phantom, DesignGridPtr grid,
                            const ErrorLaw& law, std::uint64_t seed) {
  if (!grid) throw UsageError("generate_draw: missing grid");
  SimulatedDraw draw;
  draw.trace = phantom_radon_trace(phantom, *grid);
  draw.errors.resize(grid->n());
  Rng rng(seed);
  for (Eigen::Index k = 0; k < draw.errors.size(); ++k) draw.errors[k] = law.sample(rng);
  draw.data.grid = std::move(grid);
  draw.data.y = draw.trace + draw.errors;
  draw.data.meta = {seed, law.describe(), phantom.id()};
  return draw;
}

SinogramData generate_data(const PhantomSpec& phantom, DesignGridPtr grid,
                           const ErrorLaw& law, std::uint64_t seed) {
  return generate_draw(phantom, std::move(grid), law, seed).data;
}

}  // namespace rspec
