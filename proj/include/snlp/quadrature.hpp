#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace snlp {

struct AdaptiveSimpsonResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

/// Adaptive Simpson with Richardson-corrected panels. Throws NumericalError
/// when the depth limit is reached before the absolute tolerance.
AdaptiveSimpsonResult adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                                       double abs_tol = 1e-10, int max_depth = 40);

/// Running integral of samples on a uniform grid: out[i] ~ int_{t0}^{t_i}.
/// Even nodes get composite Simpson; odd nodes add a three-point partial panel.
/// Needs at least 3 samples.
std::vector<double> cumulative_simpson(std::span<const double> samples, double step);

/// Composite Simpson over an odd number of uniform samples.
double simpson(std::span<const double> samples, double step);

}  // namespace snlp
