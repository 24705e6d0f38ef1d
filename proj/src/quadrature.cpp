#include "snlp/quadrature.hpp"

#include <nlohmann/json.hpp>

#include "snlp/errors.hpp"

namespace snlp {

namespace {

struct Panel {
  double lo, mid, hi;
  double f_lo, f_mid, f_hi;
  double whole;
};

double simpson_panel(double lo, double hi, double f_lo, double f_mid, double f_hi) {
  return (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
}

void refine(const std::function<double(double)>& f, const Panel& p, double tol, int depth,
            AdaptiveSimpsonResult& acc, bool& depth_exhausted) {
  const double left_mid = 0.5 * (p.lo + p.mid);
  const double right_mid = 0.5 * (p.mid + p.hi);
  const double f_lm = f(left_mid);
  const double f_rm = f(right_mid);
  acc.evaluations += 2;
  const double left = simpson_panel(p.lo, p.mid, p.f_lo, f_lm, p.f_mid);
  const double right = simpson_panel(p.mid, p.hi, p.f_mid, f_rm, p.f_hi);
  const double delta = left + right - p.whole;
  if (std::abs(delta) <= 15.0 * tol || depth <= 0) {
    if (depth <= 0 && std::abs(delta) > 15.0 * tol) depth_exhausted = true;
    acc.value += left + right + delta / 15.0;
    acc.error_estimate += std::abs(delta) / 15.0;
    return;
  }
  refine(f, {p.lo, left_mid, p.mid, p.f_lo, f_lm, p.f_mid, left}, 0.5 * tol, depth - 1, acc, depth_exhausted);
  refine(f, {p.mid, right_mid, p.hi, p.f_mid, f_rm, p.f_hi, right}, 0.5 * tol, depth - 1, acc, depth_exhausted);
}

}  // namespace

AdaptiveSimpsonResult adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                                       double abs_tol, int max_depth) {
  AdaptiveSimpsonResult acc;
  if (hi == lo) return acc;
  const double sign = hi > lo ? 1.0 : -1.0;
  if (sign < 0) std::swap(lo, hi);
  const double mid = 0.5 * (lo + hi);
  const double f_lo = f(lo), f_mid = f(mid), f_hi = f(hi);
  acc.evaluations = 3;
  bool exhausted = false;
  refine(f, {lo, mid, hi, f_lo, f_mid, f_hi, simpson_panel(lo, hi, f_lo, f_mid, f_hi)}, abs_tol, max_depth,
         acc, exhausted);
  if (exhausted || !std::isfinite(acc.value)) {
    nlohmann::json d = {{"lo", lo}, {"hi", hi}, {"tolerance", abs_tol}, {"evaluations", acc.evaluations},
                        {"value", acc.value}, {"error_estimate", acc.error_estimate}};
    throw NumericalError("adaptive_simpson: tolerance not reached", d.dump());
  }
  acc.value *= sign;
  return acc;
}

std::vector<double> cumulative_simpson(std::span<const double> y, double h) {
  if (y.size() < 3) throw DomainError("cumulative_simpson: need at least 3 samples");
  std::vector<double> out(y.size(), 0.0);
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (i % 2 == 0) {
      out[i] = out[i - 2] + h / 3.0 * (y[i - 2] + 4.0 * y[i - 1] + y[i]);
    } else if (i + 1 < y.size()) {
      // int over [t_{i-1}, t_i] from the quadratic through i-1, i, i+1
      out[i] = out[i - 1] + h / 12.0 * (5.0 * y[i - 1] + 8.0 * y[i] - y[i + 1]);
    } else {
      out[i] = out[i - 1] + h / 12.0 * (-y[i - 2] + 8.0 * y[i - 1] + 5.0 * y[i]);
    }
  }
  return out;
}

double simpson(std::span<const double> y, double h) {
  if (y.size() < 3 || y.size() % 2 == 0) throw DomainError("simpson: need an odd number (>= 3) of samples");
  double s = y.front() + y.back();
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * y[i];
  return s * h / 3.0;
}

}  // namespace snlp
