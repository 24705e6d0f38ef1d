#include "snlp/scale_generalized.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "snlp/errors.hpp"
#include "snlp/quadrature.hpp"
#include "snlp/scale_classical.hpp"

namespace snlp {

namespace {

// Levels closer than this many reference steps to b are not solved; iota is
// extrapolated there instead.
constexpr double kMinLevelSteps = 10.0;

std::size_t steps_for(double s, double b, double step_ref) {
  return static_cast<std::size_t>(std::ceil((s - b) / step_ref - 1e-9));
}

std::size_t odd_nodes(double fraction, std::size_t n_outer) {
  auto intervals = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n_outer - 1) / 2.0)) * 2;
  return std::max<std::size_t>(intervals, 4) + 1;
}

void check_control(const QuadratureControl& c) {
  if (c.n_outer < 5) throw DomainError("quadrature: n_outer must be >= 5");
  if (c.n_inner < 16) throw DomainError("quadrature: n_inner must be >= 16");
}

}  // namespace

double iota(const LevyModel& model, const BivariatePotential& potential, double b, double s, std::size_t n) {
  if (!(s > b)) throw DomainError("iota: need s > b");
  return solve_frozen_level(model, potential, b, {s, n, false}).iota;
}

double kappa(const LevyModel& model, const BivariatePotential& potential, double b, double z, std::size_t n) {
  if (!(z > b)) throw DomainError("kappa: need z > b");
  if (static_cast<double>(n) < kMinLevelSteps) throw DomainError("kappa: z - b below grid resolution");
  return solve_frozen_level(model, potential, b, {z, n, true}).kappa;
}

std::size_t LevelProfile::index_of(double level) const {
  const double tol = 1e-12 * std::max(1.0, std::abs(level));
  const auto it = std::lower_bound(s.begin(), s.end(), level - tol);
  if (it == s.end() || std::abs(*it - level) > tol) throw DomainError("level profile: level is not a node");
  return static_cast<std::size_t>(it - s.begin());
}

LevelProfile level_profile(const LevyModel& model, const BivariatePotential& potential, double b, double lo,
                           double hi, std::span<const double> extra_breaks, std::size_t n_nodes, double step_ref,
                           bool with_kappa, bool parallel) {
  if (!(lo >= b) || !(hi > lo)) throw DomainError("level profile: need b <= lo < hi");
  if (n_nodes < 3) throw DomainError("level profile: need at least 3 nodes");
  if (!(step_ref > 0.0)) throw DomainError("level profile: step must be > 0");

  const double span = hi - lo;
  std::vector<double> cuts{lo, hi};
  auto add_cut = [&](double v) {
    if (v > lo && v < hi) cuts.push_back(v);
  };
  for (double v : potential.level_breaks(b)) add_cut(v);
  for (double v : extra_breaks) add_cut(v);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [&](double p, double q) { return q - p < 1e-12 * span; }),
             cuts.end());
  if (cuts.back() != hi) cuts.back() = hi;

  LevelProfile prof;
  prof.step_ref = step_ref;
  std::vector<std::pair<std::size_t, std::size_t>> panels;  // [first, last] node indices
  const double target = static_cast<double>(n_nodes - 1);
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a0 = cuts[p], a1 = cuts[p + 1];
    auto intervals = static_cast<std::size_t>(std::lround((a1 - a0) / span * target / 2.0)) * 2;
    intervals = std::max<std::size_t>(intervals, 2);
    const double h = (a1 - a0) / static_cast<double>(intervals);
    const std::size_t first = prof.s.empty() ? 0 : prof.s.size() - 1;
    if (prof.s.empty()) {
      prof.s.push_back(a0);
      prof.weights.push_back(0.0);
    }
    for (std::size_t k = 1; k <= intervals; ++k) {
      prof.s.push_back(k == intervals ? a1 : a0 + h * static_cast<double>(k));
      prof.weights.push_back(0.0);
    }
    for (std::size_t k = 0; k <= intervals; ++k) {
      const double c = (k == 0 || k == intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      prof.weights[first + k] += c * h / 3.0;
    }
    panels.emplace_back(first, prof.s.size() - 1);
  }

  const std::size_t n = prof.s.size();
  std::vector<LevelRequest> requests;
  std::vector<std::size_t> solved;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = prof.s[i];
    if (s - b < kMinLevelSteps * step_ref) {
      if (with_kappa) {
        nlohmann::json d = {{"level", s}, {"b", b}, {"step", step_ref}};
        throw NumericalError("level profile: kappa requested below grid resolution", d.dump());
      }
      continue;
    }
    requests.push_back({s, steps_for(s, b, step_ref), with_kappa});
    solved.push_back(i);
  }
  if (solved.size() < 2) {
    nlohmann::json d = {{"lo", lo}, {"hi", hi}, {"b", b}, {"step", step_ref}, {"solved", solved.size()}};
    throw NumericalError("level profile: fewer than two solvable levels", d.dump());
  }

  std::vector<FrozenLevel> levels(requests.size());
  if (parallel)
    evaluate_levels(model, potential, b, requests, levels);
  else
    serial::evaluate_levels(model, potential, b, requests, levels);

  prof.iota.assign(n, 0.0);
  if (with_kappa) prof.kappa.assign(n, 0.0);
  for (std::size_t k = 0; k < solved.size(); ++k) {
    prof.iota[solved[k]] = levels[k].iota;
    if (with_kappa) prof.kappa[solved[k]] = levels[k].kappa;
  }
  // skipped nodes are a prefix, since s - b grows along the grid
  const std::size_t p = solved[0], q = solved[1];
  prof.extrapolated = p;
  for (std::size_t i = 0; i < p; ++i) {
    const double slope = (prof.iota[q] - prof.iota[p]) / (prof.s[q] - prof.s[p]);
    prof.iota[i] = prof.iota[p] + slope * (prof.s[i] - prof.s[p]);
  }

  prof.cum_iota.assign(n, 0.0);
  for (const auto& [first, last] : panels) {
    const double h = (prof.s[last] - prof.s[first]) / static_cast<double>(last - first);
    const auto part = cumulative_simpson(std::span<const double>(prof.iota).subspan(first, last - first + 1), h);
    const double offset = prof.cum_iota[first];
    for (std::size_t k = 1; k < part.size(); ++k) prof.cum_iota[first + k] = offset + part[k];
  }
  return prof;
}

GeneralizedScaleResult evaluate_exit_fixed(const LevyModel& model, const BivariatePotential& potential,
                                           const GFunction& g, const ExitSpec& spec, std::size_t n_outer,
                                           std::size_t n_inner, bool parallel, const OvershootFunction& h) {
  const auto sp = ExitSpec::make(spec.b, spec.x, spec.a);
  check_control({n_outer, n_inner});

  double h_factor = 1.0;
  if (h) {
    if (model.has_jumps()) throw DomainError("exit_down: a general overshoot function needs the MC engine for jump models");
    h_factor = h(sp.b, sp.b);
  }

  const double step_ref = sp.width() / static_cast<double>(n_inner);
  const auto prof = level_profile(model, potential, sp.b, sp.x, sp.a, {}, n_outer, step_ref, true, parallel);

  const double w_x = wq(model, 0.0, sp.x - sp.b);
  GeneralizedScaleResult r;
  r.diagnostics.classical_up = w_x / wq(model, 0.0, sp.a - sp.b);
  r.up_laplace = r.diagnostics.classical_up * std::exp(-prof.cum_iota.back());

  double down = 0.0;
  for (std::size_t i = 0; i < prof.s.size(); ++i) {
    const double z = prof.s[i];
    const double ratio = w_x / wq(model, 0.0, z - sp.b) * std::exp(-prof.cum_iota[i]);
    down += prof.weights[i] * g(z) * ratio * prof.kappa[i];
  }
  r.down_value = h_factor * down;

  r.iota_grid.reserve(prof.s.size());
  r.kappa_grid.reserve(prof.s.size());
  for (std::size_t i = 0; i < prof.s.size(); ++i) {
    r.iota_grid.emplace_back(prof.s[i], prof.iota[i]);
    r.kappa_grid.emplace_back(prof.s[i], prof.kappa[i]);
  }
  r.diagnostics.n_outer = n_outer;
  r.diagnostics.n_inner = n_inner;
  r.diagnostics.h_factor = h_factor;
  r.diagnostics.extrapolated_nodes = prof.extrapolated;
  return r;
}

GeneralizedScaleResult evaluate_exit(const LevyModel& model, const BivariatePotential& potential, const GFunction& g,
                                     const ExitSpec& spec, const QuadratureControl& control,
                                     const OvershootFunction& h) {
  check_control(control);
  std::size_t n_outer = control.n_outer | 1u;
  std::size_t n_inner = control.n_inner;
  auto result = evaluate_exit_fixed(model, potential, g, spec, n_outer, n_inner, control.parallel, h);
  auto close = [&](double now, double before) {
    return std::abs(now - before) <= control.rel_tol * std::abs(now) || std::abs(now - before) < 1e-15;
  };
  for (int d = 1; d <= control.max_doublings; ++d) {
    n_outer = 2 * n_outer - 1;
    n_inner *= 2;
    auto next = evaluate_exit_fixed(model, potential, g, spec, n_outer, n_inner, control.parallel, h);
    const double change = std::max(std::abs(next.up_laplace - result.up_laplace) / std::abs(next.up_laplace),
                                   std::abs(next.down_value - result.down_value) /
                                       std::max(std::abs(next.down_value), 1e-300));
    const bool done = close(next.up_laplace, result.up_laplace) && close(next.down_value, result.down_value);
    result = std::move(next);
    result.diagnostics.doublings = d;
    result.diagnostics.last_rel_change = change;
    if (done) {
      result.diagnostics.converged = true;
      return result;
    }
  }
  return result;
}

double exit_up_laplace(const LevyModel& model, const BivariatePotential& potential, const ExitSpec& spec,
                       std::size_t n_outer, std::size_t n_inner) {
  return evaluate_exit_fixed(model, potential, g_one(), spec, n_outer, n_inner).up_laplace;
}

double exit_down_functional(const LevyModel& model, const BivariatePotential& potential, const GFunction& g,
                            const ExitSpec& spec, std::size_t n_outer, std::size_t n_inner) {
  return evaluate_exit_fixed(model, potential, g, spec, n_outer, n_inner).down_value;
}

double supremum_atom(const LevyModel& model, const ExitSpec& spec) { return classical_exit_up(model, 0.0, spec); }

double supremum_density(const LevyModel& model, const ExitSpec& spec, double z) {
  const auto sp = ExitSpec::make(spec.b, spec.x, spec.a);
  if (!(z >= sp.x && z < sp.a)) throw DomainError("supremum_density: z must lie in [x, a)");
  const double w_x = wq(model, 0.0, sp.x - sp.b);
  const double p_down = 1.0 - w_x / wq(model, 0.0, sp.a - sp.b);
  return w_x / wq(model, 0.0, z - sp.b) * n_height_tail(model, z - sp.b) / p_down;
}

double conditional_laplace_given_sup(const LevyModel& model, const BivariatePotential& potential,
                                     const ExitSpec& spec, double z, const QuadratureControl& control) {
  const auto sp = ExitSpec::make(spec.b, spec.x, spec.a);
  check_control(control);
  if (!(z >= sp.x && z <= sp.a)) throw DomainError("conditional_laplace_given_sup: z must lie in [x, a]");
  const double step_ref = sp.width() / static_cast<double>(control.n_inner);

  double cum = 0.0;
  if (z > sp.x) {
    const auto nodes = odd_nodes((z - sp.x) / (sp.a - sp.x), control.n_outer);
    cum = level_profile(model, potential, sp.b, sp.x, z, {}, nodes, step_ref, false, control.parallel)
              .cum_iota.back();
  }
  if (z == sp.a) return std::exp(-cum);

  const auto k = kappa(model, potential, sp.b, z, steps_for(z, sp.b, step_ref));
  return std::exp(-cum) * k / n_height_tail(model, z - sp.b);
}

std::vector<double> conditional_curve(const LevyModel& model, const BivariatePotential& potential,
                                      const ExitSpec& spec, std::span<const double> zs,
                                      const QuadratureControl& control) {
  const auto sp = ExitSpec::make(spec.b, spec.x, spec.a);
  check_control(control);
  for (double z : zs)
    if (!(z >= sp.x && z <= sp.a)) throw DomainError("conditional_curve: z must lie in [x, a]");
  const double step_ref = sp.width() / static_cast<double>(control.n_inner);
  const auto prof = level_profile(model, potential, sp.b, sp.x, sp.a, zs, control.n_outer | 1u, step_ref, true,
                                  control.parallel);
  std::vector<double> out;
  out.reserve(zs.size());
  for (double z : zs) {
    const auto i = prof.index_of(z);
    const double damp = std::exp(-prof.cum_iota[i]);
    out.push_back(z == sp.a ? damp : damp * prof.kappa[i] / n_height_tail(model, z - sp.b));
  }
  return out;
}

double generalized_w(const LevyModel& model, const BivariatePotential& potential, double b, double x,
                     const QuadratureControl& control) {
  if (!(x > b)) return 0.0;
  check_control(control);
  // the outer Simpson grid is already far below the solver error; refine the solver step only
  auto at = [&](std::size_t n_inner) {
    const double step_ref = (x - b) / static_cast<double>(n_inner);
    const auto prof = level_profile(model, potential, b, b, x, {}, control.n_outer | 1u, step_ref, false,
                                    control.parallel);
    return prof.cum_iota.back();
  };
  std::size_t n_inner = control.n_inner;
  double log_ratio = at(n_inner);
  for (int d = 0; d < control.max_doublings; ++d) {
    n_inner *= 2;
    const double next = at(n_inner);
    const bool done = std::abs(std::expm1(next - log_ratio)) < control.rel_tol;
    log_ratio = next;
    if (done) break;
  }
  return wq(model, 0.0, x - b) * std::exp(log_ratio);
}

ZTruncation z_f_truncated(const LevyModel& model, const BivariatePotential& potential, double b, double x,
                          double a_max, double tail_tol, const QuadratureControl& control, int max_doublings) {
  if (!(x > b)) throw DomainError("z_f_truncated: need x > b");
  if (!(a_max > x)) throw DomainError("z_f_truncated: need a_max > x");
  if (!(tail_tol > 0.0)) throw DomainError("z_f_truncated: tail_tol must be > 0");
  check_control(control);

  const double step_ref = (a_max - b) / static_cast<double>(control.n_inner);
  const std::size_t nodes = control.n_outer | 1u;
  const double w_x = wq(model, 0.0, x - b);

  ZTruncation out;
  out.w_f = generalized_w(model, potential, b, x, control);

  // int_x^A kappa(z) / W_f(z, b) dz scaled by W_f(x, b):
  //   W(x-b) * int_x^A kappa(z) / W(z-b) * exp{-int_x^z iota} dz
  double lo = x, hi = a_max, offset = 0.0, total = 0.0;
  for (int d = 0;; ++d) {
    const auto prof = level_profile(model, potential, b, lo, hi, {}, nodes, step_ref, true, control.parallel);
    double part = 0.0;
    for (std::size_t i = 0; i < prof.s.size(); ++i)
      part += prof.weights[i] * prof.kappa[i] / wq(model, 0.0, prof.s[i] - b) * std::exp(-(offset + prof.cum_iota[i]));
    offset += prof.cum_iota.back();
    total += w_x * part;
    out.a_max = hi;
    out.last_increment = w_x * part;
    out.doublings = d;
    if (d > 0 && std::abs(out.last_increment) < tail_tol) break;
    if (d == max_doublings) {
      nlohmann::json diag = {{"a_max", hi}, {"last_increment", out.last_increment}, {"tail_tol", tail_tol},
                             {"doublings", d}};
      throw NumericalError("z_f_truncated: tail did not converge", diag.dump());
    }
    lo = hi;
    hi = x + 2.0 * (hi - x);
  }
  out.value = out.w_f + total;
  return out;
}

double local_time_laplace(const LevyModel& model, const UnivariatePotential& f, const ExitSpec& spec,
                          const QuadratureControl& control) {
  const auto r = evaluate_exit(model, BivariatePotential::lifted(f), g_one(), spec, control);
  return r.up_laplace + r.down_value;
}

}  // namespace snlp
