#pragma once

#include <complex>
#include <string>

namespace snlp {

enum class Family { BrownianDrift, ExpJumpDiffusion };

enum class DriftRegime { DriftsToPlusInfinity, DriftsToMinusInfinity, Oscillates };

std::string to_string(Family family);
std::string to_string(DriftRegime regime);

/// Spectrally negative Levy process with Gaussian part and (optionally)
/// exponentially distributed downward jumps:
///
///   psi(l) = mu*l + sigma^2 l^2 / 2 - rate * l / (eta + l),   eta = 1/jump_mean.
///
/// Immutable once built; every member is a pure function of the parameters.
class LevyModel {
 public:
  static LevyModel brownian(double mu, double sigma);
  static LevyModel exp_jump_diffusion(double mu, double sigma, double rate, double jump_mean);

  Family family() const noexcept { return family_; }
  double mu() const noexcept { return mu_; }
  double sigma() const noexcept { return sigma_; }
  double jump_rate() const noexcept { return rate_; }
  double jump_mean() const noexcept { return jump_mean_; }
  bool has_jumps() const noexcept { return family_ == Family::ExpJumpDiffusion && rate_ > 0.0; }

  /// Laplace exponent on [0, inf). Throws DomainError for lambda < 0.
  double psi(double lambda) const;
  /// Analytic continuation, used by the Laplace inversion contour.
  std::complex<double> psi(std::complex<double> lambda) const;
  double psi_prime(double lambda) const;

  /// psi'(0+) in closed form: mu - rate * jump_mean.
  double psi_prime_at_zero() const noexcept;

  /// Largest root lambda >= 0 of psi(lambda) = q.
  double phi(double q) const;

  DriftRegime drift_regime() const noexcept;

  /// Both families have integrable small jumps, so this is sigma != 0.
  bool has_unbounded_variation() const noexcept { return sigma_ != 0.0; }

  /// Exponent psi(l + c) - psi(c), expressed in the same family.
  LevyModel esscher_tilt(double c) const;

  bool operator==(const LevyModel&) const = default;

 private:
  LevyModel(Family family, double mu, double sigma, double rate, double jump_mean)
      : family_(family), mu_(mu), sigma_(sigma), rate_(rate), jump_mean_(jump_mean) {}

  Family family_;
  double mu_;
  double sigma_;
  double rate_;
  double jump_mean_;
};

/// Parses "bm:mu,sigma" or "ejd:mu,sigma,rate,jump_mean".
LevyModel parse_model(const std::string& text);
std::string format_model(const LevyModel& model);

}  // namespace snlp
