#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "snlp/exit_spec.hpp"
#include "snlp/levy_model.hpp"
#include "snlp/path_kernel.hpp"
#include "snlp/potential.hpp"
#include "snlp/scale_generalized.hpp"

namespace snlp {

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  double elapsed = 0.0;  // seconds
  bool operator==(const Estimate&) const = default;
};

/// Sample mean and standard error of `values` (pairwise-summed). With
/// `paired`, consecutive entries are averaged first (antithetic pairs).
Estimate estimate_from(const std::vector<double>& values, bool paired = false);

struct ExitMCResult {
  Estimate up_laplace;    // E[e^{-int F}; up]
  Estimate down_value;    // E[g(S_T) h(X_{T-}, X_T) e^{-int F}; down]
  Estimate p_up;
  std::size_t n_up = 0;
  std::size_t n_down = 0;
  std::size_t n_censored = 0;
  std::vector<ExitSampleRecord> samples;  // filled only on request
  std::vector<std::string> warnings;
};

/// Monte Carlo estimates of the two-sided exit functionals. Throws
/// NumericalError when more than 0.1% of the paths hit t_cap.
ExitMCResult run_exit_mc(const LevyModel& model, const BivariatePotential& potential, const GFunction& g,
                         const OvershootFunction& h, const ExitSpec& spec, const MCConfig& cfg,
                         bool keep_samples = false);

/// Raw samples as CSV: "path,exited_up,s_at_exit,x_pre,x_post,functional".
void write_samples_csv(std::ostream& os, const std::vector<ExitSampleRecord>& samples);

struct ConditionalBin {
  double lo = 0.0;
  double hi = 0.0;
  double midpoint = 0.0;
  Estimate mc;
  double deterministic = 0.0;           // conditional Laplace transform at the midpoint
  double deterministic_bin_mean = 0.0;  // its average over the bin under the density of S_T
  double zscore = 0.0;                  // against the bin mean
  bool empty = false;
};

struct ConditionalMCResult {
  std::vector<ConditionalBin> bins;
  Estimate top_mc;              // up-exits, S_T = a
  double top_deterministic = 0.0;
  double top_zscore = 0.0;
  std::size_t non_empty = 0;
  std::size_t within_3se = 0;   // non-empty bins with |z| < 3
  std::vector<std::string> warnings;
};

/// Down-exit samples binned by S_T over [x, a), each bin paired with the
/// deterministic conditional expectation at its midpoint and with its
/// density-weighted bin average (the exact estimand of the bin mean).
ConditionalMCResult conditional_mc(const LevyModel& model, const BivariatePotential& potential, const ExitSpec& spec,
                                   const MCConfig& cfg, std::size_t n_bins, const QuadratureControl& control = {});

struct OccupationMCResult {
  Estimate time_integral;        // A = int_0^T f(X_t) dt
  Estimate occupation_integral;  // B = int_b^a f(y) L^y dy
  Estimate laplace_time;         // e^{-A}
  Estimate laplace_occupation;   // e^{-B}
  Estimate discrepancy;          // |A - B|
  double bandwidth = 0.0;
  std::size_t n_levels = 0;
};

/// Both sides of the occupation formula per path; bandwidth 2 sqrt(dt).
OccupationMCResult occupation_mc(const LevyModel& model, const UnivariatePotential& f, const ExitSpec& spec,
                                 const MCConfig& cfg, std::size_t n_levels);

/// z = (det - mc.mean) / mc.std_error. A zero standard error gives 0 when the
/// values agree to 1e-9 and +-inf otherwise.
double zscore(double deterministic, const Estimate& mc);

}  // namespace snlp
