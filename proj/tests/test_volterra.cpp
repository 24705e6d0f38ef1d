#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "snlp/errors.hpp"
#include "snlp/volterra.hpp"

using namespace snlp;

namespace {
const LevyModel bm01 = LevyModel::brownian(0, 1);
}

TEST_SUITE("volterra") {

TEST_CASE("zero potential reproduces W and Z = 1") {
  for (const auto& m : {bm01, LevyModel::exp_jump_diffusion(1, 1, 1, 1)}) {
    const auto sol = solve_renewal(m, UnivariatePotential::constant(0), 0.5, 2.5, 64);
    for (std::size_t i = 0; i < sol.base.n; ++i) {
      const double u = sol.base.node(i);
      CHECK(std::abs(sol.base.w_values[i] - wq(m, 0, u - 0.5)) < 1e-12);
      CHECK(sol.z_table.z_values[i] == 1.0);
      CHECK(sol.z_table.z_deriv[i] == 0.0);
    }
  }
}

TEST_CASE("constant potential recovers the q-scale functions") {
  const auto f = UnivariatePotential::constant(0.5);
  const auto w = solve_w_f(bm01, f, 0, 1, 2000);
  CHECK(std::abs(w.base.w_values.back() - 2 * std::sinh(1.0)) < 1e-6);
  const auto z = solve_z_f(bm01, f, 0, 1, 2000);
  CHECK(std::abs(z.z_table.z_values.back() - std::cosh(1.0)) < 1e-6);
  CHECK(std::abs(z.z_table.z_deriv.back() - std::sinh(1.0)) < 1e-5);
  CHECK(z.base.n == 2001);  // W columns come along

  SUBCASE("exit ratio") {
    const auto sol = solve_w_f(bm01, f, 0, 1, 2000);
    CHECK(std::abs(sol.base.w_values[1000] / sol.base.w_values[2000] - std::sinh(0.5) / std::sinh(1.0)) < 1e-6);
  }
}

TEST_CASE("second-order convergence") {
  const oracle::Brownian o{0.3, 1.2};
  const auto m = LevyModel::brownian(0.3, 1.2);
  const auto f = UnivariatePotential::constant(0.8);
  double prev = 0.0;
  for (std::size_t n : {100, 200, 400, 800}) {
    const auto sol = solve_renewal(m, f, 0, 2, n);
    double err = 0.0;
    for (std::size_t i = 0; i < sol.base.n; ++i) {
      const double u = sol.base.node(i);
      err = std::max({err, std::abs(sol.base.w_values[i] - o.w(0.8, u)), std::abs(sol.z_table.z_values[i] - o.z(0.8, u))});
    }
    if (prev > 0) CHECK(prev / err >= 3.0);
    prev = err;
  }
}

TEST_CASE("jump potential against the ODE solution") {
  const auto f = UnivariatePotential::level(0.5, 0.5);
  const auto sol = solve_w_f(bm01, f, 0, 2, 2000);
  for (std::size_t i = 0; i < sol.base.n; i += 100)
    CHECK(std::abs(sol.base.w_values[i] - oracle::w_level_potential(0.5, 0.5, sol.base.node(i))) < 2e-6);
}

TEST_CASE("monotone in the potential") {
  const auto zero = solve_w_f(bm01, UnivariatePotential::constant(0), 0, 1, 200);
  const auto lvl = solve_renewal(bm01, UnivariatePotential::level(0.5, 0.5), 0, 1, 200);
  const auto full = solve_w_f(bm01, UnivariatePotential::constant(0.5), 0, 1, 200);
  for (std::size_t i = 0; i <= 200; ++i) {
    CHECK(zero.base.w_values[i] <= lvl.base.w_values[i]);
    CHECK(lvl.base.w_values[i] <= full.base.w_values[i] + 1e-15);
    CHECK(lvl.z_table.z_values[i] >= 1.0);
  }
  for (std::size_t i = 1; i <= 200; ++i) CHECK(lvl.base.w_values[i] > lvl.base.w_values[i - 1]);
}

TEST_CASE("derivative column matches differences of the values") {
  const auto m = LevyModel::exp_jump_diffusion(1, 1, 1, 1);
  const auto sol = solve_renewal(m, UnivariatePotential::constant(0.7), 0, 2, 400);
  const double h = sol.grid_step;
  for (std::size_t i = 20; i < 400; i += 20) {
    const double fd_w = (sol.base.w_values[i + 1] - sol.base.w_values[i - 1]) / (2 * h);
    const double fd_z = (sol.z_table.z_values[i + 1] - sol.z_table.z_values[i - 1]) / (2 * h);
    CHECK(std::abs(fd_w - sol.base.w_deriv[i]) < 1e-3);
    CHECK(std::abs(fd_z - sol.z_table.z_deriv[i]) < 1e-3);
  }
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(solve_w_f(bm01, UnivariatePotential::constant(0.5), 0, 1, 8), DomainError);
  CHECK_THROWS_AS(solve_w_f(bm01, UnivariatePotential::constant(0.5), 1, 1, 100), DomainError);
  // a potential that breaks its declared bound
  const UnivariatePotential liar([](double x) { return 2.0 * x; }, 1.0);
  CHECK_THROWS_AS(solve_w_f(bm01, liar, 0, 2, 100), DomainError);
  CHECK_THROWS_AS(UnivariatePotential([](double) { return 1.0; }, -1.0), DomainError);
}

}
