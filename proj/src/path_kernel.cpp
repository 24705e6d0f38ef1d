#include "snlp/path_kernel.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <algorithm>
#include <random>

#include "snlp/errors.hpp"

namespace snlp {

namespace {

// Bridge extremes with exponent above this have probability < 4e-18.
constexpr double kNegligibleExponent = 40.0;

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index, std::uint64_t which) {
  return std::mt19937_64(splitmix(splitmix(seed) ^ splitmix(2 * index + which)));
}

class Occupation {
 public:
  Occupation(const OccupationGrid& grid, double b, double a)
      : grid_(grid), b_(b), dy_((a - b) / static_cast<double>(grid.n_levels - 1)), local_(grid.n_levels, 0.0) {}

  void add(double x, double weight) {
    const double eps = grid_.bandwidth;
    const double lo = std::ceil((x - eps - b_) / dy_);
    const double hi = std::floor((x + eps - b_) / dy_);
    const long first = std::max(0L, static_cast<long>(lo));
    const long last = std::min(static_cast<long>(grid_.n_levels) - 1, static_cast<long>(hi));
    const double mass = weight / (2.0 * eps);
    for (long k = first; k <= last; ++k)
      if (std::abs(x - (b_ + dy_ * static_cast<double>(k))) < eps) local_[static_cast<std::size_t>(k)] += mass;
  }

  double integral() const {
    double sum = 0.0;
    for (std::size_t k = 0; k < local_.size(); ++k) {
      const double w = (k == 0 || k + 1 == local_.size()) ? 0.5 * dy_ : dy_;
      sum += w * (*grid_.f)(b_ + dy_ * static_cast<double>(k)) * local_[k];
    }
    return sum;
  }

 private:
  const OccupationGrid& grid_;
  double b_;
  double dy_;
  std::vector<double> local_;
};

}  // namespace

PathOutput simulate_path(const LevyModel& model, const BivariatePotential& potential, const ExitSpec& spec,
                         const MCConfig& cfg, std::size_t path_index, const OccupationGrid* occupation) {
  const double a = spec.a, b = spec.b;
  const double sigma = model.sigma();
  const double s2 = sigma * sigma;
  const double mu = model.mu();
  const double t_cap = cfg.t_cap > 0.0 ? cfg.t_cap : 1e4 * spec.width() * spec.width() / s2;

  const std::size_t stream_index = cfg.antithetic ? path_index / 2 : path_index;
  const double sign = (cfg.antithetic && path_index % 2 == 1) ? -1.0 : 1.0;
  auto gauss_rng = substream(cfg.seed, stream_index, 0);
  auto event_rng = substream(cfg.seed, stream_index, 1);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  auto open_uniform = [&] { return 1.0 - uniform(event_rng); };  // (0, 1]

  const bool jumps = model.has_jumps();
  std::exponential_distribution<double> clock(jumps ? model.jump_rate() : 1.0);
  std::exponential_distribution<double> jump_size(1.0 / model.jump_mean());

  std::optional<Occupation> occ;
  if (occupation) occ.emplace(*occupation, b, a);

  PathOutput out;
  auto& rec = out.record;
  double x = spec.x, s = spec.x, t = 0.0, integral = 0.0;
  double f0 = potential(s, x);
  double next_jump = jumps ? clock(event_rng) : std::numeric_limits<double>::infinity();

  while (true) {
    double h = cfg.dt;
    bool jump_now = false;
    if (next_jump - t <= cfg.dt) {
      h = next_jump - t;
      jump_now = true;
    }
    const double x1 = x + mu * h + sigma * std::sqrt(h) * sign * normal(gauss_rng);

    bool up = false, down = false;
    double s1 = std::max(s, x1);
    if (cfg.bridge_correction) {
      if (h > 0.0 && 2.0 * (s1 - x) * (s1 - x1) / (s2 * h) < kNegligibleExponent) {
        const double d = x1 - x;
        const double peak = 0.5 * (x + x1 + std::sqrt(d * d - 2.0 * s2 * h * std::log(open_uniform())));
        s1 = std::max(s1, peak);
      }
      up = s1 >= a;
      if (!up) {
        if (x1 <= b) {
          down = true;
        } else {
          const double e = 2.0 * (x - b) * (x1 - b) / (s2 * h);
          down = e < kNegligibleExponent && open_uniform() < std::exp(-e);
        }
      }
    } else {
      up = x1 >= a;
      down = !up && x1 <= b;
    }

    double f1;
    if (up) {
      f1 = potential(a, a);
    } else if (down) {
      f1 = potential(s1, b);
    } else {
      f1 = potential(s1, x1);
    }
    integral += 0.5 * (f0 + f1) * h;
    if (occ) {
      occ->add(x, 0.5 * h);
      occ->add(up ? a : (down ? b : x1), 0.5 * h);
    }
    t += h;
    s = std::min(s1, a);

    if (up || down) {
      rec.exited_up = up;
      rec.s_at_exit = up ? a : s;
      rec.x_pre = rec.x_post = up ? a : b;
      break;
    }

    x = x1;
    if (jump_now) {
      const double pre = x;
      x -= jump_size(event_rng);
      next_jump = t + clock(event_rng);
      if (x < b) {
        rec.exited_up = false;
        rec.s_at_exit = s;
        rec.x_pre = pre;
        rec.x_post = x;
        break;
      }
    }
    f0 = potential(s, x);
    if (t >= t_cap) {
      rec.censored = true;
      rec.s_at_exit = s;
      rec.x_pre = rec.x_post = x;
      break;
    }
  }
  rec.functional = integral;
  rec.exit_time = t;
  if (occ) out.occupation_integral = occ->integral();
  return out;
}

void simulate_paths(const LevyModel& model, const BivariatePotential& potential, const ExitSpec& spec,
                    const MCConfig& cfg, std::size_t first, std::span<PathOutput> out,
                    const OccupationGrid* occupation) {
  const long n = static_cast<long>(out.size());
  std::vector<std::exception_ptr> errors(out.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = simulate_path(model, potential, spec, cfg, first + static_cast<std::size_t>(i), occupation);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace serial {

void simulate_paths(const LevyModel& model, const BivariatePotential& potential, const ExitSpec& spec,
                    const MCConfig& cfg, std::size_t first, std::span<PathOutput> out,
                    const OccupationGrid* occupation) {
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = simulate_path(model, potential, spec, cfg, first + i, occupation);
}

}  // namespace serial

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace snlp
