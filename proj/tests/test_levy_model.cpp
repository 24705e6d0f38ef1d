#include <doctest.h>

#include <cmath>

#include "snlp/errors.hpp"
#include "snlp/levy_model.hpp"

using namespace snlp;

TEST_SUITE("levy_model") {

TEST_CASE("brownian exponent") {
  CHECK(LevyModel::brownian(1, 1).psi(2.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(LevyModel::brownian(0, 1).psi(2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(LevyModel::brownian(0, 1).psi(std::sqrt(2.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(LevyModel::brownian(1, 0), DomainError);
  CHECK_THROWS_AS(LevyModel::brownian(1, -1), DomainError);
}

TEST_CASE("jump diffusion exponent") {
  const auto degenerate = LevyModel::exp_jump_diffusion(1, 1, 0, 1);
  CHECK(degenerate.psi(2.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(LevyModel::exp_jump_diffusion(1, 1, 1, 1).psi(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  for (const auto& m : {LevyModel::brownian(-3, 0.2), LevyModel::exp_jump_diffusion(2, 1.5, 4, 0.3)})
    CHECK(m.psi(0.0) == 0.0);
  CHECK_THROWS_AS(LevyModel::exp_jump_diffusion(1, 1, -1, 1), DomainError);
  CHECK_THROWS_AS(LevyModel::exp_jump_diffusion(1, 1, 1, 0), DomainError);
  CHECK_THROWS_AS(LevyModel::exp_jump_diffusion(1, 0, 1, 1), DomainError);
  CHECK_THROWS_AS(LevyModel::brownian(0, 1).psi(-0.1), DomainError);
}

TEST_CASE("psi is strictly convex") {
  for (const auto& m : {LevyModel::brownian(-1, 0.5), LevyModel::exp_jump_diffusion(1, 1, 3, 2)}) {
    for (double l1 : {0.0, 0.1, 1.0, 3.0}) {
      for (double l2 : {0.5, 2.0, 7.0}) {
        if (l2 <= l1) continue;
        const double scale = std::max({1.0, std::abs(m.psi(l1)), std::abs(m.psi(l2))});
        CHECK(m.psi(0.5 * (l1 + l2)) < 0.5 * (m.psi(l1) + m.psi(l2)) + 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("phi inverts psi") {
  CHECK(LevyModel::brownian(0, 1).phi(2.0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(LevyModel::brownian(-1, 1).phi(0.0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(LevyModel::brownian(1, 1).phi(0.0) == 0.0);
  for (const auto& m : {LevyModel::brownian(0.3, 0.7), LevyModel::brownian(-2, 1.3),
                        LevyModel::exp_jump_diffusion(1, 1, 1, 1), LevyModel::exp_jump_diffusion(1, 1, 2, 1)}) {
    double prev = -1.0;
    for (double q : {0.0, 0.1, 0.5, 1.0, 5.0}) {
      const double r = m.phi(q);
      CHECK(r >= prev);
      prev = r;
      CHECK(std::abs(m.psi(r) - q) <= 1e-10 * std::max(q, 1e-2));
    }
  }
  CHECK_THROWS_AS(LevyModel::brownian(0, 1).phi(-1), DomainError);
}

TEST_CASE("drift regime") {
  CHECK(LevyModel::brownian(1, 1).drift_regime() == DriftRegime::DriftsToPlusInfinity);
  CHECK(LevyModel::brownian(0, 1).drift_regime() == DriftRegime::Oscillates);
  CHECK(LevyModel::exp_jump_diffusion(1, 1, 2, 1).drift_regime() == DriftRegime::DriftsToMinusInfinity);
  CHECK(LevyModel::exp_jump_diffusion(1, 1, 1, 1).drift_regime() == DriftRegime::Oscillates);
  CHECK(LevyModel::exp_jump_diffusion(1, 1, 2, 1).psi_prime_at_zero() == -1.0);
}

TEST_CASE("unbounded variation") {
  CHECK(LevyModel::brownian(0, 1).has_unbounded_variation());
  CHECK(LevyModel::exp_jump_diffusion(1, 0.5, 3, 2).has_unbounded_variation());
}

TEST_CASE("esscher tilt") {
  CHECK(LevyModel::brownian(0, 1).esscher_tilt(1.0) == LevyModel::brownian(1, 1));
  const auto j = LevyModel::exp_jump_diffusion(1, 1, 1, 1);
  CHECK(j.esscher_tilt(0.0) == j);
  CHECK(LevyModel::brownian(0.4, 2).esscher_tilt(0.0) == LevyModel::brownian(0.4, 2));

  const auto t = j.esscher_tilt(1.0);
  CHECK(t.jump_rate() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(t.jump_mean() == doctest::Approx(0.5).epsilon(1e-15));
  for (double l : {0.5, 1.0, 2.0}) CHECK(std::abs(t.psi(l) - (j.psi(l + 1) - j.psi(1))) < 1e-12);

  SUBCASE("tilts compose") {
    const auto m = LevyModel::exp_jump_diffusion(-0.5, 0.8, 2.5, 0.7);
    const auto a = m.esscher_tilt(0.3).esscher_tilt(1.1);
    const auto b = m.esscher_tilt(1.4);
    CHECK(std::abs(a.mu() - b.mu()) < 1e-12);
    CHECK(std::abs(a.sigma() - b.sigma()) < 1e-12);
    CHECK(std::abs(a.jump_rate() - b.jump_rate()) < 1e-12);
    CHECK(std::abs(a.jump_mean() - b.jump_mean()) < 1e-12);
  }

  SUBCASE("tilting at phi(q) never drifts down") {
    for (const auto& m : {LevyModel::brownian(-1, 1), LevyModel::exp_jump_diffusion(1, 1, 2, 1),
                          LevyModel::exp_jump_diffusion(-1, 0.5, 3, 2)})
      for (double q : {0.0, 0.1, 1.0, 4.0})
        CHECK(m.esscher_tilt(m.phi(q)).psi_prime_at_zero() >= -1e-10);
  }
  CHECK_THROWS_AS(j.esscher_tilt(-1.0), DomainError);
}

TEST_CASE("model text round trip") {
  for (const auto& m : {LevyModel::brownian(0.1, 0.3), LevyModel::exp_jump_diffusion(1.0 / 3, 1, 2, 0.7)})
    CHECK(parse_model(format_model(m)) == m);
  CHECK(parse_model("bm:0,1") == LevyModel::brownian(0, 1));
  CHECK_THROWS_AS(parse_model("bm:0"), DomainError);
  CHECK_THROWS_AS(parse_model("xx:0,1"), DomainError);
  CHECK_THROWS_AS(parse_model("bm:0,abc"), DomainError);
  CHECK_THROWS_AS(parse_model("bm"), DomainError);
}

}
