#pragma once

#include "rspec/empirical.hpp"
#include "rspec/phantom.hpp"

namespace rspec {

/// Exact transformed-phantom values at the design points (the noise-free
/// response), via the diagonal factors and the detector basis.
Eigen::VectorXd phantom_radon_trace(const PhantomSpec& phantom, const DesignGrid& grid);

/// Observations Y_k = (transformed phantom at z_k) + eps_k with iid errors
/// drawn from `law` using the stream seeded by `seed`.
SinogramData generate_data(const PhantomSpec& phantom, DesignGridPtr grid,
                           const ErrorLaw& law, std::uint64_t seed);

/// The same draw split into its parts (simulation diagnostics need the raw
/// errors next to the data).
struct SimulatedDraw {
  SinogramData data;
  Eigen::VectorXd trace;   // noise-free response
  Eigen::VectorXd errors;  // eps_k
};

SimulatedDraw generate_draw(const PhantomSpec& phantom, DesignGridPtr grid,
                            const ErrorLaw& law, std::uint64_t seed);

}  // namespace rspec
