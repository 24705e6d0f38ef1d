#include "snlp/simulate.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "snlp/errors.hpp"

namespace snlp {

namespace {

constexpr std::size_t kChunk = 1 << 16;
constexpr double kMaxCensoredFraction = 1e-3;

void validate(const ExitSpec& spec, const MCConfig& cfg) {
  ExitSpec::make(spec.b, spec.x, spec.a);
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw DomainError("mc: dt must be positive");
  if (cfg.n_paths < 100) throw DomainError("mc: need at least 100 paths");
  if (cfg.t_cap < 0.0) throw DomainError("mc: t_cap must be non-negative");
  if (cfg.antithetic && cfg.n_paths % 2 != 0) throw DomainError("mc: antithetic sampling needs an even path count");
}

std::vector<std::string> step_warnings(const ExitSpec& spec, const MCConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.dt > spec.width() * spec.width() / 100.0)
    out.push_back("dt exceeds (a - b)^2 / 100; barrier bias may dominate");
  return out;
}

// Runs all paths in fixed-size chunks and hands each chunk to `visit`.
template <class Visit>
double for_each_chunk(const LevyModel& model, const BivariatePotential& potential, const ExitSpec& spec,
                      const MCConfig& cfg, const OccupationGrid* occ, Visit&& visit) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<PathOutput> buffer;
  for (std::size_t first = 0; first < cfg.n_paths; first += kChunk) {
    buffer.resize(std::min(kChunk, cfg.n_paths - first));
    simulate_paths(model, potential, spec, cfg, first, buffer, occ);
    visit(first, std::span<const PathOutput>(buffer));
  }
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void check_censoring(std::size_t censored, std::size_t total) {
  if (static_cast<double>(censored) > kMaxCensoredFraction * static_cast<double>(total))
    throw NumericalError("mc: too many paths reached t_cap",
                         "{\"censored\":" + std::to_string(censored) + ",\"paths\":" + std::to_string(total) + "}");
}

}  // namespace

Estimate estimate_from(const std::vector<double>& values, bool paired) {
  std::vector<double> v;
  if (paired) {
    v.resize(values.size() / 2);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * (values[2 * i] + values[2 * i + 1]);
  } else {
    v = values;
  }
  Estimate e;
  e.n = values.size();
  if (v.empty()) return e;
  const double mean = pairwise_sum(v) / static_cast<double>(v.size());
  e.mean = mean;
  if (v.size() > 1) {
    for (double& x : v) x = (x - mean) * (x - mean);
    const double var = pairwise_sum(v) / static_cast<double>(v.size() - 1);
    e.std_error = std::sqrt(var / static_cast<double>(v.size()));
  }
  return e;
}

double zscore(double deterministic, const Estimate& mc) {
  const double diff = deterministic - mc.mean;
  if (mc.std_error > 0.0) return diff / mc.std_error;
  if (std::abs(diff) <= 1e-9) return 0.0;
  return diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

ExitMCResult run_exit_mc(const LevyModel& model, const BivariatePotential& potential, const GFunction& g,
                         const OvershootFunction& h, const ExitSpec& spec, const MCConfig& cfg, bool keep_samples) {
  validate(spec, cfg);
  ExitMCResult res;
  res.warnings = step_warnings(spec, cfg);

  std::vector<double> up(cfg.n_paths), down(cfg.n_paths), hit(cfg.n_paths);
  if (keep_samples) res.samples.resize(cfg.n_paths);

  const double elapsed = for_each_chunk(model, potential, spec, cfg, nullptr, [&](std::size_t first, auto chunk) {
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      const auto& r = chunk[i].record;
      const std::size_t k = first + i;
      if (keep_samples) res.samples[k] = r;
      up[k] = down[k] = hit[k] = 0.0;
      if (r.censored) {
        ++res.n_censored;
      } else if (r.exited_up) {
        ++res.n_up;
        up[k] = std::exp(-r.functional);
        hit[k] = 1.0;
      } else {
        ++res.n_down;
        const double hv = h ? h(r.x_pre, r.x_post) : 1.0;
        down[k] = g(r.s_at_exit) * hv * std::exp(-r.functional);
      }
    }
  });
  check_censoring(res.n_censored, cfg.n_paths);

  res.up_laplace = estimate_from(up, cfg.antithetic);
  res.down_value = estimate_from(down, cfg.antithetic);
  res.p_up = estimate_from(hit, cfg.antithetic);
  for (Estimate* e : {&res.up_laplace, &res.down_value, &res.p_up}) e->elapsed = elapsed;
  return res;
}

void write_samples_csv(std::ostream& os, const std::vector<ExitSampleRecord>& samples) {
  const auto old = os.precision(17);
  os << "path,exited_up,s_at_exit,x_pre,x_post,functional\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& r = samples[i];
    os << i << ',' << (r.exited_up ? 1 : 0) << ',' << r.s_at_exit << ',' << r.x_pre << ',' << r.x_post << ','
       << r.functional << '\n';
  }
  os.precision(old);
}

ConditionalMCResult conditional_mc(const LevyModel& model, const BivariatePotential& potential, const ExitSpec& spec,
                                   const MCConfig& cfg, std::size_t n_bins, const QuadratureControl& control) {
  validate(spec, cfg);
  if (n_bins < 4) throw DomainError("conditional_mc: need at least 4 bins");

  ConditionalMCResult res;
  res.warnings = step_warnings(spec, cfg);
  const double width = (spec.a - spec.x) / static_cast<double>(n_bins);
  std::vector<std::vector<double>> per_bin(n_bins);
  std::vector<double> top;
  std::size_t censored = 0;

  const double elapsed = for_each_chunk(model, potential, spec, cfg, nullptr, [&](std::size_t, auto chunk) {
    for (const auto& out : chunk) {
      const auto& r = out.record;
      if (r.censored) {
        ++censored;
      } else if (r.exited_up) {
        top.push_back(std::exp(-r.functional));
      } else {
        auto k = static_cast<std::size_t>((r.s_at_exit - spec.x) / width);
        per_bin[std::min(k, n_bins - 1)].push_back(std::exp(-r.functional));
      }
    }
  });
  check_censoring(censored, cfg.n_paths);

  // per bin: midpoint, then Gauss nodes for the density-weighted bin mean
  constexpr std::array<double, 4> gx{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                     0.8611363115940526};
  constexpr std::array<double, 4> gw{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                     0.3478548451374538};
  const std::size_t stride = 1 + gx.size();
  std::vector<double> zs;
  for (std::size_t k = 0; k < n_bins; ++k) {
    const double lo = spec.x + static_cast<double>(k) * width;
    zs.push_back(lo + 0.5 * width);
    for (double t : gx) zs.push_back(lo + 0.5 * width * (1.0 + t));
  }
  zs.push_back(spec.a);
  const auto curve = conditional_curve(model, potential, spec, zs, control);

  res.bins.resize(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    auto& bin = res.bins[k];
    bin.lo = spec.x + static_cast<double>(k) * width;
    bin.hi = bin.lo + width;
    bin.midpoint = zs[k * stride];
    bin.deterministic = curve[k * stride];
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < gx.size(); ++i) {
      const double wd = gw[i] * supremum_density(model, spec, zs[k * stride + 1 + i]);
      num += wd * curve[k * stride + 1 + i];
      den += wd;
    }
    bin.deterministic_bin_mean = num / den;
    bin.empty = per_bin[k].empty();
    if (bin.empty) {
      res.warnings.push_back("bin " + std::to_string(k) + " is empty");
      continue;
    }
    bin.mc = estimate_from(per_bin[k]);
    bin.mc.elapsed = elapsed;
    bin.zscore = zscore(bin.deterministic_bin_mean, bin.mc);
    ++res.non_empty;
    if (std::abs(bin.zscore) < 3.0) ++res.within_3se;
  }
  res.top_mc = estimate_from(top);
  res.top_mc.elapsed = elapsed;
  res.top_deterministic = curve.back();
  res.top_zscore = top.empty() ? 0.0 : zscore(res.top_deterministic, res.top_mc);
  if (top.empty()) res.warnings.push_back("no up-exits");
  return res;
}

OccupationMCResult occupation_mc(const LevyModel& model, const UnivariatePotential& f, const ExitSpec& spec,
                                 const MCConfig& cfg, std::size_t n_levels) {
  validate(spec, cfg);
  if (n_levels < 8) throw DomainError("occupation_mc: need at least 8 levels");
  const double bandwidth = 2.0 * std::sqrt(cfg.dt);
  const double dy = spec.width() / static_cast<double>(n_levels - 1);
  if (bandwidth < 2.0 * dy)
    throw DomainError("occupation_mc: bandwidth 2 sqrt(dt) is below the level spacing; raise --levels or dt");
  if (bandwidth > 0.25 * spec.width())
    throw DomainError("occupation_mc: bandwidth 2 sqrt(dt) exceeds a quarter of the interval; lower dt");

  const OccupationGrid grid{n_levels, bandwidth, &f};
  const auto lifted = BivariatePotential::lifted(f);
  std::vector<double> a_vals(cfg.n_paths), b_vals(cfg.n_paths), ea(cfg.n_paths), eb(cfg.n_paths),
      gap(cfg.n_paths);
  std::size_t censored = 0;
  const double elapsed = for_each_chunk(model, lifted, spec, cfg, &grid, [&](std::size_t first, auto chunk) {
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      const std::size_t k = first + i;
      if (chunk[i].record.censored) ++censored;
      a_vals[k] = chunk[i].record.functional;
      b_vals[k] = chunk[i].occupation_integral;
      ea[k] = std::exp(-a_vals[k]);
      eb[k] = std::exp(-b_vals[k]);
      gap[k] = std::abs(a_vals[k] - b_vals[k]);
    }
  });
  check_censoring(censored, cfg.n_paths);

  OccupationMCResult res;
  res.time_integral = estimate_from(a_vals, cfg.antithetic);
  res.occupation_integral = estimate_from(b_vals, cfg.antithetic);
  res.laplace_time = estimate_from(ea, cfg.antithetic);
  res.laplace_occupation = estimate_from(eb, cfg.antithetic);
  res.discrepancy = estimate_from(gap, cfg.antithetic);
  for (Estimate* e : {&res.time_integral, &res.occupation_integral, &res.laplace_time, &res.laplace_occupation,
                      &res.discrepancy})
    e->elapsed = elapsed;
  res.bandwidth = bandwidth;
  res.n_levels = n_levels;
  return res;
}

}  // namespace snlp
