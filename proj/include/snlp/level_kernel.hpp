#pragma once

#include <cstddef>
#include <span>

#include "snlp/levy_model.hpp"
#include "snlp/potential.hpp"

namespace snlp {

/// One frozen-potential renewal solve on [b, s] with the slice x -> F(s, x),
/// reduced to the excursion functionals at level s:
///   iota  = W^{(f_s)}'(s)/W^{(f_s)}(s) - W'(s-b)/W(s-b)
///   kappa = (Z W' - Z' W)/W  evaluated at u = s  (= -W d/du[Z/W])
struct FrozenLevel {
  double w = 0.0;
  double dw = 0.0;
  double z = 0.0;
  double dz = 0.0;
  double iota = 0.0;
  double kappa = 0.0;
};

struct LevelRequest {
  double s = 0.0;
  std::size_t steps = 0;
  bool with_z = false;
};

FrozenLevel solve_frozen_level(const LevyModel& model, const BivariatePotential& potential, double b,
                               const LevelRequest& request);

/// Independent frozen solves, one per request, spread over OpenMP threads.
/// Output is bit-identical to serial::evaluate_levels for any thread count.
/// The first failure (lowest index) is rethrown after the loop.
void evaluate_levels(const LevyModel& model, const BivariatePotential& potential, double b,
                     std::span<const LevelRequest> requests, std::span<FrozenLevel> out);

namespace serial {

/// Reference implementation of snlp::evaluate_levels.
void evaluate_levels(const LevyModel& model, const BivariatePotential& potential, double b,
                     std::span<const LevelRequest> requests, std::span<FrozenLevel> out);

}  // namespace serial

}  // namespace snlp
