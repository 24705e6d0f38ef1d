#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "snlp/exit_spec.hpp"
#include "snlp/laplace_inversion.hpp"
#include "snlp/levy_model.hpp"

namespace snlp {

/// W^{(q)}(x). Zero for x < 0. Closed form for BrownianDrift, Talbot
/// inversion of 1/(psi(beta) - q) otherwise.
double wq(const LevyModel& model, double q, double x, const TalbotOptions& talbot = {});

/// Z^{(q)}(x) = 1 + q int_0^x W^{(q)}.
double zq(const LevyModel& model, double q, double x, const TalbotOptions& talbot = {});

/// d/dx W^{(q)}(x) for x > 0.
double w_derivative(const LevyModel& model, double q, double x, const TalbotOptions& talbot = {});

/// W^{(q)}'(0+) = 2 / sigma^2 for both families.
double w_derivative_at_zero(const LevyModel& model) noexcept;

/// Excursion-height tail W'(z)/W(z) at q = 0, z > 0.
double n_height_tail(const LevyModel& model, double z, const TalbotOptions& talbot = {});

/// E_x[e^{-qT}; T = tau_a^+].
double classical_exit_up(const LevyModel& model, double q, const ExitSpec& spec);
/// E_x[e^{-qT}; T = tau_b^-].
double classical_exit_down(const LevyModel& model, double q, const ExitSpec& spec);

/// P_x(tau_a^+ < tau_b^-) through the excursion route
/// exp{-int_x^a n_height_tail(s - b) ds}, integrated by adaptive Simpson.
double exit_up_via_excursions(const LevyModel& model, const ExitSpec& spec, double abs_tol = 1e-10);

/// Sampled W^{(g)} on a uniform grid; the first node is argument 0.
struct ScaleTable {
  double grid_lo = 0.0;
  double grid_hi = 0.0;
  std::size_t n = 0;  // node count
  std::vector<double> w_values;
  std::vector<double> w_deriv;
  std::vector<double> z_values;  // empty when not requested
  std::vector<double> z_deriv;
  std::string normalization_note;

  double step() const noexcept { return n > 1 ? (grid_hi - grid_lo) / static_cast<double>(n - 1) : 0.0; }
  double node(std::size_t i) const noexcept { return grid_lo + step() * static_cast<double>(i); }
  bool has_z() const noexcept { return !z_values.empty(); }
};

/// Table of W^{(q)}, W^{(q)}' (and optionally Z^{(q)}, Z^{(q)}') on [0, hi].
ScaleTable scale_table(const LevyModel& model, double q, double hi, std::size_t n, bool with_z);

/// CSV dump: header "x,W,Wprime[,Z,Zprime]", 17 significant digits.
void write_csv(std::ostream& os, const ScaleTable& table);

/// W(kh) and W'(kh) for k = 0..m (q-scale), the convolution kernel of the
/// renewal equations. Entry 0 of the derivative is the right limit 2/sigma^2.
struct KernelSamples {
  std::vector<double> w;
  std::vector<double> dw;
};
KernelSamples sample_scale_kernel(const LevyModel& model, double q, double step, std::size_t m);

}  // namespace snlp
