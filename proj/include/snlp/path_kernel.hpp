#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "snlp/exit_spec.hpp"
#include "snlp/levy_model.hpp"
#include "snlp/potential.hpp"

namespace snlp {

struct MCConfig {
  double dt = 1e-4;
  std::size_t n_paths = 100000;
  std::uint64_t seed = 1;
  bool bridge_correction = true;
  /// Per-path time budget; 0 selects 1e4 (a - b)^2 / sigma^2.
  double t_cap = 0.0;
  /// Paths 2k and 2k+1 share Gaussian increments with opposite signs.
  bool antithetic = false;
};

struct ExitSampleRecord {
  bool exited_up = false;
  bool censored = false;
  double s_at_exit = 0.0;  // S_T
  double x_pre = 0.0;      // X_{T-}
  double x_post = 0.0;     // X_T
  double functional = 0.0; // int_0^T F(S_t, X_t) dt, trapezoidal in t
  double exit_time = 0.0;
};

/// Box-kernel occupation density on uniform levels y_k over [b, a]; the
/// kernel half-width is `bandwidth`.
struct OccupationGrid {
  std::size_t n_levels = 0;
  double bandwidth = 0.0;
  const UnivariatePotential* f = nullptr;
};

/// With an OccupationGrid, `occupation_integral` is int_b^a f(y) L^y dy from
/// the smoothed local times (trapezoid over the levels).
struct PathOutput {
  ExitSampleRecord record;
  double occupation_integral = 0.0;
};

/// Simulates one path of the exit problem. The random stream depends only on
/// (cfg.seed, path_index), never on scheduling.
///
/// Diffusive stretches use exact Gaussian increments on steps of cfg.dt, cut
/// at the exponential jump epochs. With bridge correction the running
/// supremum takes the exactly sampled maximum of the Brownian bridge over
/// each step (this is also the upper crossing test), and the lower barrier
/// uses the bridge crossing probability exp(-2 (X0-b)(X1-b) / (sigma^2 h)).
PathOutput simulate_path(const LevyModel& model, const BivariatePotential& potential, const ExitSpec& spec,
                         const MCConfig& cfg, std::size_t path_index, const OccupationGrid* occupation = nullptr);

/// Paths [first, first + out.size()) into `out`, OpenMP-parallel.
void simulate_paths(const LevyModel& model, const BivariatePotential& potential, const ExitSpec& spec,
                    const MCConfig& cfg, std::size_t first, std::span<PathOutput> out,
                    const OccupationGrid* occupation = nullptr);

namespace serial {

/// Reference implementation of snlp::simulate_paths.
void simulate_paths(const LevyModel& model, const BivariatePotential& potential, const ExitSpec& spec,
                    const MCConfig& cfg, std::size_t first, std::span<PathOutput> out,
                    const OccupationGrid* occupation = nullptr);

}  // namespace serial

/// Fixed-order pairwise sum; the result does not depend on thread count.
double pairwise_sum(std::span<const double> values);

}  // namespace snlp
