#include "snlp/level_kernel.hpp"

#include <exception>
#include <vector>

#include "snlp/errors.hpp"
#include "snlp/scale_classical.hpp"
#include "snlp/volterra.hpp"

namespace snlp {

FrozenLevel solve_frozen_level(const LevyModel& model, const BivariatePotential& potential, double b,
                               const LevelRequest& request) {
  if (!(request.s > b)) throw DomainError("frozen level: need s > b");
  if (request.steps < 2) throw DomainError("frozen level: need at least 2 steps");

  const std::size_t m = request.steps;
  const double step = (request.s - b) / static_cast<double>(m);
  const auto kernel = sample_scale_kernel(model, 0.0, step, m);
  const auto moments = detail::cell_moments(potential.frozen(request.s), b, step, m);

  std::vector<double> w(m + 1), dw(m + 1), z, dz;
  if (request.with_z) {
    z.resize(m + 1);
    dz.resize(m + 1);
  }
  detail::march(kernel, moments, w, dw, z, dz);

  FrozenLevel out;
  out.w = w[m];
  out.dw = dw[m];
  // the same kernel samples on both sides, so F = 0 gives iota = 0 exactly
  out.iota = out.dw / out.w - kernel.dw[m] / kernel.w[m];
  if (request.with_z) {
    out.z = z[m];
    out.dz = dz[m];
    out.kappa = (out.z * out.dw - out.dz * out.w) / out.w;
  }
  if (!std::isfinite(out.iota) || (request.with_z && !std::isfinite(out.kappa)))
    throw NumericalError("frozen level: non-finite excursion functional",
                         "{\"s\":" + std::to_string(request.s) + ",\"steps\":" + std::to_string(m) + "}");
  return out;
}

void evaluate_levels(const LevyModel& model, const BivariatePotential& potential, double b,
                     std::span<const LevelRequest> requests, std::span<FrozenLevel> out) {
  if (out.size() != requests.size()) throw DomainError("evaluate_levels: output size mismatch");
  const long n = static_cast<long>(requests.size());
  std::vector<std::exception_ptr> errors(requests.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = solve_frozen_level(model, potential, b, requests[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace serial {

void evaluate_levels(const LevyModel& model, const BivariatePotential& potential, double b,
                     std::span<const LevelRequest> requests, std::span<FrozenLevel> out) {
  if (out.size() != requests.size()) throw DomainError("evaluate_levels: output size mismatch");
  for (std::size_t i = 0; i < requests.size(); ++i) out[i] = solve_frozen_level(model, potential, b, requests[i]);
}

}  // namespace serial

}  // namespace snlp
