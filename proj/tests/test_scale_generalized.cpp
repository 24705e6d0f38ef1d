#include <doctest.h>

#include <omp.h>

#include <cmath>

#include "oracles.hpp"
#include "snlp/errors.hpp"
#include "snlp/scale_classical.hpp"
#include "snlp/scale_generalized.hpp"

using namespace snlp;

namespace {

const LevyModel bm01 = LevyModel::brownian(0, 1);
const ExitSpec unit = ExitSpec::make(0, 0.5, 1);
const auto zero = BivariatePotential::constant(0);
const auto half = BivariatePotential::constant(0.5);

}  // namespace

TEST_SUITE("scale_generalized") {

TEST_CASE("iota") {
  for (double s : {0.3, 1.0, 2.0}) CHECK(iota(bm01, zero, 0, s, 200) == 0.0);
  CHECK(std::abs(iota(bm01, half, 0, 1, 1024) - (1.0 / std::tanh(1.0) - 1.0)) < 1e-5);
  const auto ind = BivariatePotential::indicator(0.5, 0.25);
  const double v = iota(bm01, ind, 0, 1, 1024);
  CHECK(v > 0.0);
  CHECK(v < bm01.phi(0.5));
  CHECK_THROWS_AS(iota(bm01, half, 1, 1, 100), DomainError);
}

TEST_CASE("kappa") {
  CHECK(std::abs(kappa(bm01, zero, 0, 2, 512) - 0.5) < 1e-10);
  CHECK(std::abs(kappa(bm01, half, 0, 1, 1024) - 1.0 / std::sinh(1.0)) < 1e-5);
  for (double z : {0.2, 0.7, 1.5}) CHECK(kappa(bm01, half, 0, z, 400) < kappa(bm01, zero, 0, z, 400));
  CHECK_THROWS_AS(kappa(bm01, half, 0, 1, 4), DomainError);

  SUBCASE("zero potential gives the height tail") {
    for (const auto& m : {bm01, LevyModel::brownian(1, 1), LevyModel::exp_jump_diffusion(1, 1, 1, 1)}) {
      double worst = 0.0;
      for (double z = 0.1; z <= 3.0; z += 0.1)
        worst = std::max(worst, std::abs(kappa(m, zero, -0.5, z - 0.5, 256) - n_height_tail(m, z)));
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("exit up") {
  CHECK(std::abs(exit_up_laplace(bm01, zero, unit) - 0.5) < 1e-12);
  CHECK(std::abs(exit_up_laplace(bm01, half, unit) - std::sinh(0.5) / std::sinh(1.0)) < 1e-5);
  const double r = exit_up_laplace(bm01, BivariatePotential::reflected(0.4, 2), unit);
  CHECK(r > 0.0);
  CHECK(r < 0.5);
}

TEST_CASE("exit down") {
  CHECK(std::abs(exit_down_functional(bm01, zero, g_one(), unit) - 0.5) < 1e-8);
  CHECK(std::abs(exit_down_functional(bm01, zero, parse_g("identity"), unit) - 0.5 * std::log(2.0)) < 1e-8);
  const double expect = std::sinh(0.5) * (1.0 / std::tanh(0.5) - 1.0 / std::tanh(1.0));
  CHECK(std::abs(exit_down_functional(bm01, half, g_one(), unit) - expect) < 1e-5);
  CHECK(std::abs(expect - classical_exit_down(bm01, 0.5, unit)) < 1e-12);
}

TEST_CASE("constant potential reproduces the discounted identities for every family") {
  for (const auto& m : {LevyModel::brownian(0.7, 1.3), LevyModel::exp_jump_diffusion(1, 1, 1, 1),
                        LevyModel::exp_jump_diffusion(-0.5, 0.8, 2, 0.5)}) {
    for (const auto& s : {unit, ExitSpec::make(-1, 0.3, 1)}) {
      const auto r = evaluate_exit(m, BivariatePotential::constant(0.8), g_one(), s);
      CAPTURE(format_model(m));
      CHECK(std::abs(r.up_laplace - classical_exit_up(m, 0.8, s)) < 1e-5);
      CHECK(std::abs(r.down_value - classical_exit_down(m, 0.8, s)) < 1e-5);
    }
  }
}

TEST_CASE("damping monotonicity and bounds") {
  const std::vector<BivariatePotential> ladder{zero, BivariatePotential::reflected(0.2, 2),
                                               BivariatePotential::reflected(0.4, 2), half};
  double prev = 2.0;
  for (const auto& F : ladder) {
    const auto r = evaluate_exit(bm01, F, g_one(), unit);
    CHECK(r.up_laplace < prev);
    CHECK(r.up_laplace <= classical_exit_up(bm01, 0, unit) + 1e-12);
    CHECK(r.down_value >= 0.0);
    CHECK(r.down_value <= 1.0);
    prev = r.up_laplace;
  }
  CHECK(evaluate_exit(bm01, zero, g_one(), unit).up_laplace == doctest::Approx(classical_exit_up(bm01, 0, unit)));
}

TEST_CASE("overshoot function") {
  const auto base = evaluate_exit(bm01, half, g_one(), unit);
  const auto scaled = evaluate_exit(bm01, half, g_one(), unit, {}, [](double, double) { return 0.25; });
  CHECK(scaled.down_value == doctest::Approx(0.25 * base.down_value).epsilon(1e-14));
  CHECK(scaled.up_laplace == base.up_laplace);
  CHECK_THROWS_AS(evaluate_exit(LevyModel::exp_jump_diffusion(1, 1, 1, 1), half, g_one(), unit, {},
                                [](double, double) { return 1.0; }),
                  DomainError);
}

TEST_CASE("refinement loop") {
  const auto r = evaluate_exit(bm01, BivariatePotential::reflected(0.4, 2), g_one(), unit);
  CHECK(r.diagnostics.converged);
  CHECK(r.diagnostics.last_rel_change < 1e-6);
  CHECK(r.iota_grid.size() == r.kappa_grid.size());
  CHECK(r.iota_grid.front().first == unit.x);
  CHECK(r.iota_grid.back().first == unit.a);
  QuadratureControl none;
  none.max_doublings = 0;
  const auto fixed = evaluate_exit(bm01, half, g_one(), unit, none);
  CHECK(fixed.diagnostics.doublings == 0);
  CHECK_FALSE(fixed.diagnostics.converged);
}

TEST_CASE("supremum law") {
  CHECK(supremum_density(bm01, unit, 0.8) == doctest::Approx(1.5625).epsilon(1e-12));
  const double mass = oracle::simpson([](double z) { return supremum_density(bm01, unit, z); }, 0.5, 1.0 - 1e-12, 2000);
  CHECK(std::abs(mass - 1.0) < 1e-8);
  const auto spec = ExitSpec::make(-1, 0.2, 1.5);
  for (const auto& m : {LevyModel::brownian(0.5, 1), LevyModel::exp_jump_diffusion(1, 1, 2, 1)}) {
    const double p_down = 1 - supremum_atom(m, spec);
    const double integral = oracle::simpson([&](double z) { return supremum_density(m, spec, z); }, 0.2,
                                            1.5 - 1e-12, 2000);
    CHECK(std::abs(integral * p_down + supremum_atom(m, spec) - 1.0) < 1e-10);
  }
  CHECK_THROWS_AS(supremum_density(bm01, unit, 1.0), DomainError);
  CHECK_THROWS_AS(supremum_density(bm01, unit, 0.4), DomainError);
}

TEST_CASE("conditional expectation given the supremum") {
  for (double z : {0.5, 0.6, 0.9, 1.0}) CHECK(std::abs(conditional_laplace_given_sup(bm01, zero, unit, z) - 1.0) < 1e-8);
  CHECK(std::abs(conditional_laplace_given_sup(bm01, half, unit, 1.0) - 2 * std::sinh(0.5) / std::sinh(1.0)) < 1e-5);
  CHECK_THROWS_AS(conditional_laplace_given_sup(bm01, half, unit, 1.1), DomainError);

  SUBCASE("curve agrees with pointwise evaluation") {
    const std::vector<double> zs{0.55, 0.8, 1.0};
    const auto F = BivariatePotential::reflected(0.4, 2);
    const auto curve = conditional_curve(bm01, F, unit, zs);
    for (std::size_t i = 0; i < zs.size(); ++i)
      CHECK(std::abs(curve[i] - conditional_laplace_given_sup(bm01, F, unit, zs[i])) < 1e-6);
  }

  SUBCASE("law of total expectation") {
    for (const auto& F : {half, BivariatePotential::reflected(0.4, 2)}) {
      const auto r = evaluate_exit(bm01, F, g_one(), unit);
      const double p_down = 1 - supremum_atom(bm01, unit);
      std::vector<double> zs;
      const int n = 64;
      for (int i = 0; i <= n; ++i) zs.push_back(0.5 + 0.5 * i / n * (1 - 1e-9));
      zs.push_back(1.0);
      const auto k = conditional_curve(bm01, F, unit, zs);
      double integral = 0;
      const double h = (zs[n] - zs[0]) / n;
      for (int i = 0; i <= n; ++i)
        integral += (i == 0 || i == n ? 1 : (i % 2 ? 4 : 2)) * h / 3 * k[i] * supremum_density(bm01, unit, zs[i]);
      const double lhs = integral * p_down + k.back() * supremum_atom(bm01, unit);
      CHECK(std::abs(lhs - (r.up_laplace + r.down_value)) < 1e-5);
    }
  }
}

TEST_CASE("generalized W for a constant potential") {
  for (double x : {0.5, 1.0, 2.0}) CHECK(std::abs(generalized_w(bm01, half, 0, x) - 2 * std::sinh(x)) < 1e-6 * std::sinh(x));
  CHECK(generalized_w(bm01, half, 0, -1) == 0.0);
}

TEST_CASE("truncated Z") {
  const auto m = LevyModel::brownian(1, 1);
  for (double x : {0.5, 1.0, 2.0}) {
    const auto z = z_f_truncated(m, zero, 0, x, x + 1, 1e-10);
    CHECK(std::abs(z.value - 1.0) < 1e-8);
    CHECK(z.a_max - x < 64.0);
  }
  SUBCASE("constant potential differs from cosh by a multiple of W") {
    QuadratureControl c;
    c.n_inner = 4096;
    c.n_outer = 513;
    std::vector<double> ratios;
    for (double x : {0.5, 1.0, 1.5}) {
      const auto z = z_f_truncated(bm01, half, 0, x, 12.0, 1e-8, c);
      ratios.push_back((z.value - std::cosh(x)) / (2 * std::sinh(x)));
    }
    CHECK(std::abs(ratios[0] - ratios[1]) < 1e-5);
    CHECK(std::abs(ratios[1] - ratios[2]) < 1e-5);
  }
  CHECK_THROWS_AS(z_f_truncated(m, zero, 0, 0, 1, 1e-10), DomainError);
  CHECK_THROWS_AS(z_f_truncated(m, zero, 0, 1, 0.5, 1e-10), DomainError);
  // a driftless process never lets the tail die out fast enough
  CHECK_THROWS_AS(z_f_truncated(bm01, zero, 0, 1, 2, 1e-10, {}, 2), NumericalError);
}

TEST_CASE("local time transform") {
  CHECK(std::abs(local_time_laplace(bm01, UnivariatePotential::constant(0), unit) - 1.0) < 1e-10);
  const double v = local_time_laplace(bm01, UnivariatePotential::constant(0.5), unit);
  CHECK(std::abs(v - 2 * std::sinh(0.5) / std::sinh(1.0)) < 1e-5);
  CHECK(std::abs(v - (classical_exit_up(bm01, 0.5, unit) + classical_exit_down(bm01, 0.5, unit))) < 1e-5);
}

TEST_CASE("parallel levels match the serial reference bit for bit") {
  const auto F = BivariatePotential::reflected(0.4, 2);
  std::vector<LevelRequest> req;
  for (int i = 1; i <= 40; ++i) req.push_back({0.025 * i, static_cast<std::size_t>(10 * i), i % 2 == 0});
  std::vector<FrozenLevel> a(req.size()), b(req.size());
  serial::evaluate_levels(bm01, F, 0, req, a);
  const int saved = omp_get_max_threads();
  for (int threads : {1, 3, 4}) {
    omp_set_num_threads(threads);
    evaluate_levels(bm01, F, 0, req, b);
    for (std::size_t i = 0; i < req.size(); ++i) {
      CHECK(a[i].iota == b[i].iota);
      CHECK(a[i].kappa == b[i].kappa);
      CHECK(a[i].w == b[i].w);
    }
    QuadratureControl par, ser;
    ser.parallel = false;
    const auto rp = evaluate_exit(bm01, F, g_one(), unit, par);
    const auto rs = evaluate_exit(bm01, F, g_one(), unit, ser);
    CHECK(rp.up_laplace == rs.up_laplace);
    CHECK(rp.down_value == rs.down_value);
  }
  omp_set_num_threads(saved);
  std::vector<FrozenLevel> short_out(3);
  CHECK_THROWS_AS(evaluate_levels(bm01, F, 0, req, short_out), DomainError);
}

TEST_CASE("potential parsing") {
  CHECK(parse_potential("const:0.5")(0.3, 0.1) == 0.5);
  CHECK(parse_potential("reflected:0.4")(1.0, 0.5) == doctest::Approx(0.2));
  CHECK(parse_potential("reflected:1,0.3")(1.0, 0.0) == doctest::Approx(0.3));
  CHECK(parse_potential("indicator:2,0.25")(1.0, 0.5) == 2.0);
  CHECK(parse_potential("indicator:2,0.25")(1.0, 0.9) == 0.0);
  CHECK(parse_potential("level:1,0.5")(0.0, 0.7) == 1.0);
  CHECK_FALSE(parse_potential("level:1,0.5").depends_on_supremum());
  CHECK(parse_g("identity")(0.7) == 0.7);
  CHECK(parse_g("indicator:0.5,0.8")(0.8) == 0.0);
  CHECK(parse_g("indicator:0.5,0.8")(0.5) == 1.0);
  CHECK_THROWS_AS(parse_potential("const:-1"), DomainError);
  CHECK_THROWS_AS(parse_potential("wobble:1"), DomainError);
  CHECK_THROWS_AS(parse_univariate_potential("reflected:1"), DomainError);
  CHECK_THROWS_AS(parse_g("nope"), DomainError);
}

}
