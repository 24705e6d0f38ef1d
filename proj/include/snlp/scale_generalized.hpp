#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "snlp/exit_spec.hpp"
#include "snlp/level_kernel.hpp"
#include "snlp/levy_model.hpp"
#include "snlp/potential.hpp"

namespace snlp {

/// Grid sizes for the level integral (outer, composite Simpson) and the
/// frozen renewal solves (inner). n_inner is the interval count the solver
/// would use across the whole [b, a]; shorter levels use the same step.
struct QuadratureControl {
  std::size_t n_outer = 129;
  std::size_t n_inner = 1024;
  double rel_tol = 1e-6;
  int max_doublings = 4;
  bool parallel = true;
};

/// iota(s) on n solver intervals across [b, s].
double iota(const LevyModel& model, const BivariatePotential& potential, double b, double s, std::size_t n);

/// kappa_b(z; F, 1) on n solver intervals across [b, z].
double kappa(const LevyModel& model, const BivariatePotential& potential, double b, double z, std::size_t n);

/// iota (and optionally kappa) sampled on a panelled Simpson grid over [lo, hi].
/// Panels are split at the potential's level breaks and at `extra_breaks`, so
/// every break is a node and the running integral is exact Simpson there.
struct LevelProfile {
  std::vector<double> s;
  std::vector<double> iota;
  std::vector<double> kappa;     // empty unless requested
  std::vector<double> cum_iota;  // int_{s_0}^{s_i} iota
  std::vector<double> weights;   // composite Simpson weights over [lo, hi]
  std::size_t extrapolated = 0;  // leading nodes filled by linear extrapolation
  double step_ref = 0.0;

  /// Index of the node equal to `level` (within 1e-12 relative); throws otherwise.
  std::size_t index_of(double level) const;
};

LevelProfile level_profile(const LevyModel& model, const BivariatePotential& potential, double b, double lo,
                           double hi, std::span<const double> extra_breaks, std::size_t n_nodes, double step_ref,
                           bool with_kappa, bool parallel = true);

struct ExitDiagnostics {
  std::size_t n_outer = 0;
  std::size_t n_inner = 0;
  int doublings = 0;
  double last_rel_change = 0.0;
  bool converged = false;
  double classical_up = 0.0;
  double h_factor = 1.0;
  std::size_t extrapolated_nodes = 0;
};

struct GeneralizedScaleResult {
  double up_laplace = 0.0;
  double down_value = 0.0;
  std::vector<std::pair<double, double>> iota_grid;
  std::vector<std::pair<double, double>> kappa_grid;
  ExitDiagnostics diagnostics;
};

/// Pure-Gaussian down-crossings are continuous, so a jump-overshoot function
/// h contributes the constant h(b, b). Jump models reject a non-trivial h.
using OvershootFunction = std::function<double(double pre, double post)>;

/// Both exit values at fixed grid sizes.
GeneralizedScaleResult evaluate_exit_fixed(const LevyModel& model, const BivariatePotential& potential,
                                           const GFunction& g, const ExitSpec& spec, std::size_t n_outer,
                                           std::size_t n_inner, bool parallel = true,
                                           const OvershootFunction& h = {});

/// Doubles n_outer and n_inner until successive values change by less than
/// rel_tol, or max_doublings is reached (reported, not an error).
GeneralizedScaleResult evaluate_exit(const LevyModel& model, const BivariatePotential& potential, const GFunction& g,
                                     const ExitSpec& spec, const QuadratureControl& control = {},
                                     const OvershootFunction& h = {});

/// E_x[exp{-int_0^T F(S_t, X_t) dt}; T = tau_a^+].
double exit_up_laplace(const LevyModel& model, const BivariatePotential& potential, const ExitSpec& spec,
                       std::size_t n_outer = 129, std::size_t n_inner = 1024);

/// E_x[g(S_T) exp{-int_0^T F dt}; T = tau_b^-].
double exit_down_functional(const LevyModel& model, const BivariatePotential& potential, const GFunction& g,
                            const ExitSpec& spec, std::size_t n_outer = 129, std::size_t n_inner = 1024);

/// Density of S_T on [x, a) given a down-exit.
double supremum_density(const LevyModel& model, const ExitSpec& spec, double z);
/// Atom of S_T at a: P_x(tau_a^+ < tau_b^-).
double supremum_atom(const LevyModel& model, const ExitSpec& spec);

/// E_x[exp{-int_0^T F dt} | S_T = z] for z in [x, a].
double conditional_laplace_given_sup(const LevyModel& model, const BivariatePotential& potential,
                                     const ExitSpec& spec, double z, const QuadratureControl& control = {});

/// The same conditional expectation at many z from a single level profile.
std::vector<double> conditional_curve(const LevyModel& model, const BivariatePotential& potential,
                                      const ExitSpec& spec, std::span<const double> zs,
                                      const QuadratureControl& control = {});

/// W_f(x, b) = W(x - b) exp{int_b^x iota}, halving the solver step until the
/// relative change drops below control.rel_tol.
double generalized_w(const LevyModel& model, const BivariatePotential& potential, double b, double x,
                     const QuadratureControl& control = {});

struct ZTruncation {
  double value = 0.0;
  double w_f = 0.0;            // W_f(x, b) used as the leading factor
  double a_max = 0.0;          // truncation point reached
  double last_increment = 0.0; // contribution of the final doubling
  int doublings = 0;
};

/// Z_{F,1,1}(x, b) with the infinite level integral truncated at a_max, which
/// doubles (measured from x) until the last increment drops below tail_tol.
ZTruncation z_f_truncated(const LevyModel& model, const BivariatePotential& potential, double b, double x,
                          double a_max, double tail_tol, const QuadratureControl& control = {},
                          int max_doublings = 6);

/// E_x[exp{-int_b^a f(y) L_T^y dy}] = up + down(g = 1) for F(s, x) = f(x).
double local_time_laplace(const LevyModel& model, const UnivariatePotential& f, const ExitSpec& spec,
                          const QuadratureControl& control = {});

}  // namespace snlp
