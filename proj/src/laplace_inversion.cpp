#include "snlp/laplace_inversion.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "snlp/errors.hpp"

namespace snlp {

double laplace_invert(const TransformEvaluator& transform, double x, const TalbotOptions& options) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("laplace_invert: x must be > 0");
  if (options.nodes < 4) throw DomainError("laplace_invert: need at least 4 contour nodes");

  const int m = options.nodes;
  const double r = 2.0 * m / (5.0 * x);
  auto diagnostics = [&](double partial) {
    nlohmann::json d = {{"x", x}, {"nodes", m}, {"r", r}, {"shift", options.shift}, {"partial_sum", partial}};
    return d.dump();
  };

  double sum = 0.5 * std::real(transform({r + options.shift, 0.0})) * std::exp(r * x);
  for (int k = 1; k < m; ++k) {
    const double theta = k * std::numbers::pi / m;
    const double cot = std::cos(theta) / std::sin(theta);
    const std::complex<double> s(r * theta * cot, r * theta);
    const double sigma = theta + (theta * cot - 1.0) * cot;
    sum += std::real(std::exp(x * s) * transform(s + options.shift) * std::complex<double>(1.0, sigma));
  }
  if (!std::isfinite(sum)) throw NumericalError("laplace_invert: non-finite contour sum", diagnostics(sum));

  const double value = std::exp(options.shift * x) * r / m * sum;
  if (!std::isfinite(value)) throw NumericalError("laplace_invert: overflow in shift factor", diagnostics(sum));
  return value;
}

}  // namespace snlp
