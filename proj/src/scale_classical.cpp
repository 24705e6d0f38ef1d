#include "snlp/scale_classical.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include <nlohmann/json.hpp>

#include "snlp/errors.hpp"
#include "snlp/quadrature.hpp"

namespace snlp {

ExitSpec ExitSpec::make(double b, double x, double a) {
  if (!std::isfinite(b) || !std::isfinite(x) || !std::isfinite(a))
    throw DomainError("exit spec: b, x, a must be finite");
  if (!(b < x && x < a)) throw DomainError("exit spec: need b < x < a");
  return {b, x, a};
}

namespace {

constexpr double kClampBelow = 1e-12;

// Roots r_- < r_+ of psi(l) = q for the Gaussian family; r_pm = -k +- delta.
struct GaussianRoots {
  double k;      // mu / sigma^2
  double delta;  // sqrt(mu^2 + 2 q sigma^2) / sigma^2
  double s2;     // sigma^2
};

GaussianRoots gaussian_roots(const LevyModel& m, double q) {
  const double s2 = m.sigma() * m.sigma();
  return {m.mu() / s2, std::sqrt(m.mu() * m.mu() + 2.0 * q * s2) / s2, s2};
}

// expm1(2 delta x) / delta, with the delta -> 0 limit 2x.
double growth(double delta, double x) { return delta > 0.0 ? std::expm1(2.0 * delta * x) / delta : 2.0 * x; }

double gaussian_w(const GaussianRoots& g, double x) {
  return std::exp((-g.k - g.delta) * x) * growth(g.delta, x) / g.s2;
}

double gaussian_dw(const GaussianRoots& g, double x) {
  const double r_plus = -g.k + g.delta;
  return std::exp((-g.k - g.delta) * x) * (r_plus * growth(g.delta, x) + 2.0) / g.s2;
}

double integral_exp(double r, double x) { return r != 0.0 ? std::expm1(r * x) / r : x; }

void check_q(double q, const char* who) {
  if (!(q >= 0.0) || !std::isfinite(q)) throw DomainError(std::string(who) + ": q must be >= 0");
}

TalbotOptions shifted(const TalbotOptions& base, double phi_q) {
  TalbotOptions t = base;
  t.shift = phi_q;
  return t;
}

double checked(double v, const char* who, double q, double x, const TalbotOptions& t) {
  if (!std::isfinite(v)) {
    nlohmann::json d = {{"q", q}, {"x", x}, {"nodes", t.nodes}, {"shift", t.shift}};
    throw NumericalError(std::string(who) + ": non-finite value", d.dump());
  }
  return v;
}

}  // namespace

double wq(const LevyModel& model, double q, double x, const TalbotOptions& talbot) {
  check_q(q, "wq");
  if (std::isnan(x)) throw DomainError("wq: x is NaN");
  if (x < kClampBelow) return 0.0;
  if (model.family() == Family::BrownianDrift) return checked(gaussian_w(gaussian_roots(model, q), x), "wq", q, x, talbot);
  const auto t = shifted(talbot, model.phi(q));
  const double v = laplace_invert([&](std::complex<double> beta) { return 1.0 / (model.psi(beta) - q); }, x, t);
  return checked(v, "wq", q, x, t);
}

double zq(const LevyModel& model, double q, double x, const TalbotOptions& talbot) {
  check_q(q, "zq");
  if (std::isnan(x)) throw DomainError("zq: x is NaN");
  if (x <= 0.0 || q == 0.0) return 1.0;
  if (model.family() == Family::BrownianDrift) {
    const auto g = gaussian_roots(model, q);
    const double r_plus = -g.k + g.delta, r_minus = -g.k - g.delta;
    return checked(1.0 + q / (g.s2 * g.delta) * (integral_exp(r_plus, x) - integral_exp(r_minus, x)), "zq", q, x,
                   talbot);
  }
  // L[Z](beta) = psi(beta) / (beta (psi(beta) - q))
  const auto t = shifted(talbot, model.phi(q));
  const double v = laplace_invert(
      [&](std::complex<double> beta) {
        const auto p = model.psi(beta);
        return p / (beta * (p - q));
      },
      x, t);
  return checked(v, "zq", q, x, t);
}

double w_derivative_at_zero(const LevyModel& model) noexcept { return 2.0 / (model.sigma() * model.sigma()); }

double w_derivative(const LevyModel& model, double q, double x, const TalbotOptions& talbot) {
  check_q(q, "w_derivative");
  if (!(x > 0.0)) throw DomainError("w_derivative: x must be > 0");
  if (model.family() == Family::BrownianDrift)
    return checked(gaussian_dw(gaussian_roots(model, q), x), "w_derivative", q, x, talbot);
  if (x < kClampBelow) return w_derivative_at_zero(model);
  // W(0) = 0, so L[W'](beta) = beta / (psi(beta) - q).
  const auto t = shifted(talbot, model.phi(q));
  const double v =
      laplace_invert([&](std::complex<double> beta) { return beta / (model.psi(beta) - q); }, x, t);
  return checked(v, "w_derivative", q, x, t);
}

double n_height_tail(const LevyModel& model, double z, const TalbotOptions& talbot) {
  if (!(z > 0.0)) throw DomainError("n_height_tail: z must be > 0");
  return w_derivative(model, 0.0, z, talbot) / wq(model, 0.0, z, talbot);
}

double classical_exit_up(const LevyModel& model, double q, const ExitSpec& spec) {
  const auto s = ExitSpec::make(spec.b, spec.x, spec.a);
  return wq(model, q, s.x - s.b) / wq(model, q, s.a - s.b);
}

double classical_exit_down(const LevyModel& model, double q, const ExitSpec& spec) {
  const auto s = ExitSpec::make(spec.b, spec.x, spec.a);
  const double ratio = wq(model, q, s.x - s.b) / wq(model, q, s.a - s.b);
  return zq(model, q, s.x - s.b) - zq(model, q, s.a - s.b) * ratio;
}

double exit_up_via_excursions(const LevyModel& model, const ExitSpec& spec, double abs_tol) {
  const auto s = ExitSpec::make(spec.b, spec.x, spec.a);
  // lower limit x > b keeps the integrand away from its pole at s = b
  const auto r = adaptive_simpson([&](double level) { return n_height_tail(model, level - s.b); }, s.x, s.a, abs_tol);
  return std::exp(-r.value);
}

ScaleTable scale_table(const LevyModel& model, double q, double hi, std::size_t n, bool with_z) {
  check_q(q, "scale_table");
  if (!(hi > 0.0)) throw DomainError("scale_table: hi must be > 0");
  if (n < 2) throw DomainError("scale_table: need at least 2 nodes");
  ScaleTable t;
  t.grid_lo = 0.0;
  t.grid_hi = hi;
  t.n = n;
  t.normalization_note = "W^(q) with transform 1/(psi(beta)-q); Z^(q) = 1 + q int W^(q)";
  t.w_values.resize(n);
  t.w_deriv.resize(n);
  if (with_z) {
    t.z_values.resize(n);
    t.z_deriv.resize(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double x = t.node(i);
    t.w_values[i] = wq(model, q, x);
    t.w_deriv[i] = i == 0 ? w_derivative_at_zero(model) : w_derivative(model, q, x);
    if (with_z) {
      t.z_values[i] = zq(model, q, x);
      t.z_deriv[i] = q * t.w_values[i];
    }
  }
  return t;
}

void write_csv(std::ostream& os, const ScaleTable& table) {
  const auto old_precision = os.precision(17);
  os << (table.has_z() ? "x,W,Wprime,Z,Zprime\n" : "x,W,Wprime\n");
  for (std::size_t i = 0; i < table.n; ++i) {
    os << table.node(i) << ',' << table.w_values[i] << ',' << table.w_deriv[i];
    if (table.has_z()) os << ',' << table.z_values[i] << ',' << table.z_deriv[i];
    os << '\n';
  }
  os.precision(old_precision);
}

KernelSamples sample_scale_kernel(const LevyModel& model, double q, double step, std::size_t m) {
  if (!(step > 0.0)) throw DomainError("sample_scale_kernel: step must be > 0");
  KernelSamples k;
  k.w.resize(m + 1);
  k.dw.resize(m + 1);
  k.w[0] = 0.0;
  k.dw[0] = w_derivative_at_zero(model);
  for (std::size_t i = 1; i <= m; ++i) {
    const double x = step * static_cast<double>(i);
    k.w[i] = wq(model, q, x);
    k.dw[i] = w_derivative(model, q, x);
  }
  return k;
}

}  // namespace snlp
