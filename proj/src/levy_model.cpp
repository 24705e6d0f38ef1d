#include "snlp/levy_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "snlp/errors.hpp"

namespace snlp {

std::string to_string(Family family) {
  return family == Family::BrownianDrift ? "BrownianDrift" : "ExpJumpDiffusion";
}

std::string to_string(DriftRegime regime) {
  switch (regime) {
    case DriftRegime::DriftsToPlusInfinity: return "DriftsToPlusInfinity";
    case DriftRegime::DriftsToMinusInfinity: return "DriftsToMinusInfinity";
    case DriftRegime::Oscillates: return "Oscillates";
  }
  return "?";
}

LevyModel LevyModel::brownian(double mu, double sigma) {
  if (!std::isfinite(mu)) throw DomainError("brownian: mu must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw DomainError("brownian: sigma must be > 0 (bounded-variation paths are not supported)");
  return LevyModel(Family::BrownianDrift, mu, sigma, 0.0, 1.0);
}

LevyModel LevyModel::exp_jump_diffusion(double mu, double sigma, double rate, double jump_mean) {
  if (!std::isfinite(mu)) throw DomainError("exp_jump_diffusion: mu must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw DomainError("exp_jump_diffusion: sigma must be > 0 (bounded-variation paths are not supported)");
  if (!(rate >= 0.0) || !std::isfinite(rate))
    throw DomainError("exp_jump_diffusion: jump rate must be >= 0");
  if (!(jump_mean > 0.0) || !std::isfinite(jump_mean))
    throw DomainError("exp_jump_diffusion: jump_mean must be > 0");
  return LevyModel(Family::ExpJumpDiffusion, mu, sigma, rate, jump_mean);
}

double LevyModel::psi(double lambda) const {
  if (!(lambda >= 0.0)) throw DomainError("psi: lambda must be >= 0");
  double v = mu_ * lambda + 0.5 * sigma_ * sigma_ * lambda * lambda;
  if (family_ == Family::ExpJumpDiffusion) {
    const double eta = 1.0 / jump_mean_;
    v -= rate_ * lambda / (eta + lambda);
  }
  return v;
}

std::complex<double> LevyModel::psi(std::complex<double> lambda) const {
  std::complex<double> v = mu_ * lambda + 0.5 * sigma_ * sigma_ * lambda * lambda;
  if (family_ == Family::ExpJumpDiffusion) {
    const double eta = 1.0 / jump_mean_;
    v -= rate_ * lambda / (eta + lambda);
  }
  return v;
}

double LevyModel::psi_prime(double lambda) const {
  double v = mu_ + sigma_ * sigma_ * lambda;
  if (family_ == Family::ExpJumpDiffusion) {
    const double eta = 1.0 / jump_mean_;
    v -= rate_ * eta / ((eta + lambda) * (eta + lambda));
  }
  return v;
}

double LevyModel::psi_prime_at_zero() const noexcept {
  return family_ == Family::ExpJumpDiffusion ? mu_ - rate_ * jump_mean_ : mu_;
}

double LevyModel::phi(double q) const {
  if (!(q >= 0.0) || !std::isfinite(q)) throw DomainError("phi: q must be >= 0");
  // psi <= q on [0, phi(q)] and psi > q beyond, so the sign test below
  // converges to the largest root even when q = 0 has a second root.
  if (q == 0.0 && psi_prime_at_zero() >= 0.0) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (psi(hi) <= q) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 1100 || !std::isfinite(hi)) {
      nlohmann::json d = {{"q", q}, {"lo", lo}, {"hi", hi}, {"doublings", doublings}};
      throw NumericalError("phi: could not bracket root", d.dump());
    }
  }
  int iterations = 0;
  while (hi - lo > 1e-14 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (psi(mid) > q) hi = mid; else lo = mid;
    if (++iterations > 4000) {
      nlohmann::json d = {{"q", q}, {"lo", lo}, {"hi", hi}, {"iterations", iterations}};
      throw NumericalError("phi: bisection did not converge", d.dump());
    }
  }
  double root = 0.5 * (lo + hi);
  for (int k = 0; k < 3; ++k) {
    const double slope = psi_prime(root);
    if (!(slope > 0.0)) break;
    const double next = root - (psi(root) - q) / slope;
    if (!(next >= 0.0) || std::abs(next - root) > hi - lo + 1e-12) break;
    root = next;
  }
  const double residual = std::abs(psi(root) - q);
  if (residual > 1e-12 * std::max(1.0, q)) {
    nlohmann::json d = {{"q", q}, {"root", root}, {"residual", residual}, {"lo", lo}, {"hi", hi}};
    throw NumericalError("phi: residual above tolerance", d.dump());
  }
  return root;
}

DriftRegime LevyModel::drift_regime() const noexcept {
  const double slope = psi_prime_at_zero();
  if (slope > 0.0) return DriftRegime::DriftsToPlusInfinity;
  if (slope < 0.0) return DriftRegime::DriftsToMinusInfinity;
  return DriftRegime::Oscillates;
}

LevyModel LevyModel::esscher_tilt(double c) const {
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("esscher_tilt: c must be >= 0");
  const double mu = mu_ + c * sigma_ * sigma_;
  if (family_ == Family::BrownianDrift) return LevyModel(family_, mu, sigma_, 0.0, 1.0);
  const double eta = 1.0 / jump_mean_;
  return LevyModel(family_, mu, sigma_, rate_ * eta / (eta + c), 1.0 / (eta + c));
}

namespace {

std::vector<double> parse_numbers(const std::string& list, const std::string& context) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError(context + ": '" + item + "' is not a number");
    }
  }
  return out;
}

}  // namespace

LevyModel parse_model(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw DomainError("model: expected fam:p1,p2[,p3,p4], got '" + text + "'");
  const std::string fam = text.substr(0, colon);
  const auto p = parse_numbers(text.substr(colon + 1), "model");
  if (fam == "bm") {
    if (p.size() != 2) throw DomainError("model: bm takes mu,sigma");
    return LevyModel::brownian(p[0], p[1]);
  }
  if (fam == "ejd") {
    if (p.size() != 4) throw DomainError("model: ejd takes mu,sigma,rate,jump_mean");
    return LevyModel::exp_jump_diffusion(p[0], p[1], p[2], p[3]);
  }
  throw DomainError("model: unknown family '" + fam + "' (expected bm or ejd)");
}

std::string format_model(const LevyModel& model) {
  std::ostringstream os;
  os.precision(17);
  if (model.family() == Family::BrownianDrift) {
    os << "bm:" << model.mu() << ',' << model.sigma();
  } else {
    os << "ejd:" << model.mu() << ',' << model.sigma() << ',' << model.jump_rate() << ','
       << model.jump_mean();
  }
  return os.str();
}

}  // namespace snlp
