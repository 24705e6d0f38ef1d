#include "snlp/volterra.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <nlohmann/json.hpp>

#include "snlp/errors.hpp"

namespace snlp {

namespace detail {

CellMoments cell_moments(const UnivariatePotential& f, double b, double step, std::size_t cells) {
  using Gauss = boost::math::quadrature::gauss<double, 8>;
  CellMoments mom;
  mom.m0.assign(cells, 0.0);
  mom.m1.assign(cells, 0.0);
  if (f.is_zero()) return mom;

  std::vector<double> breaks = f.breaks();
  std::sort(breaks.begin(), breaks.end());

  std::vector<double> cuts;
  for (std::size_t j = 0; j < cells; ++j) {
    const double lo = b + step * static_cast<double>(j);
    const double hi = b + step * static_cast<double>(j + 1);
    cuts.assign({lo});
    for (auto it = std::upper_bound(breaks.begin(), breaks.end(), lo); it != breaks.end() && *it < hi; ++it)
      cuts.push_back(*it);
    cuts.push_back(hi);

    double m0 = 0.0, m1 = 0.0;
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
      m1 += Gauss::integrate([&](double u) { return f(u) * (u - lo) / step; }, cuts[p], cuts[p + 1]);
      m0 += Gauss::integrate([&](double u) { return f(u) * (hi - u) / step; }, cuts[p], cuts[p + 1]);
    }
    mom.m0[j] = m0;
    mom.m1[j] = m1;
    if (m0 != 0.0 || m1 != 0.0) mom.active.push_back(j);
  }
  return mom;
}

void march(const KernelSamples& k, const CellMoments& mom, std::span<double> w, std::span<double> dw,
           std::span<double> z, std::span<double> dz) {
  const std::size_t n = k.w.size();
  const bool do_w = !w.empty();
  const bool do_z = !z.empty();
  const auto& act = mom.active;

  // integrand weights: a_j = y_j m0_j (left hat), c_j = y_{j+1} m1_j (right hat)
  std::vector<double> wa(n, 0.0), wc(n, 0.0), za(n, 0.0), zc(n, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    // active cells with j < i, i.e. fully inside [u_0, u_i]
    const auto last = std::lower_bound(act.begin(), act.end(), i);
    double sw = 0.0, sz = 0.0;
    for (auto it = act.begin(); it != last; ++it) {
      const std::size_t j = *it;
      // K_0 = W(0) = 0 kills the j = i - 1 right-hat term
      sw += k.w[i - j] * wa[j] + k.w[i - j - 1] * wc[j];
      sz += k.w[i - j] * za[j] + k.w[i - j - 1] * zc[j];
    }
    if (do_w) w[i] = k.w[i] + sw;
    if (do_z) z[i] = 1.0 + sz;

    if (i < n - 1) {
      if (do_w) wa[i] = w[i] * mom.m0[i];
      if (do_z) za[i] = z[i] * mom.m0[i];
    }
    if (i > 0) {
      if (do_w) wc[i - 1] = w[i] * mom.m1[i - 1];
      if (do_z) zc[i - 1] = z[i] * mom.m1[i - 1];
    }

    double sdw = 0.0, sdz = 0.0;
    for (auto it = act.begin(); it != last; ++it) {
      const std::size_t j = *it;
      sdw += k.dw[i - j] * wa[j] + k.dw[i - j - 1] * wc[j];
      sdz += k.dw[i - j] * za[j] + k.dw[i - j - 1] * zc[j];
    }
    if (do_w) dw[i] = k.dw[i] + sdw;
    if (do_z) dz[i] = sdz;
  }
}

}  // namespace detail

namespace {

enum Columns : unsigned { kW = 1u, kZ = 2u };

void check_finite(std::span<const double> v, const char* what, double b, double hi, std::size_t n) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      nlohmann::json d = {{"column", what}, {"node", i}, {"b", b}, {"hi", hi}, {"intervals", n}};
      throw NumericalError("volterra: non-finite value in solution", d.dump());
    }
  }
}

ScaleTable empty_table(double b, double hi, std::size_t nodes, const char* note) {
  ScaleTable t;
  t.grid_lo = b;
  t.grid_hi = hi;
  t.n = nodes;
  t.normalization_note = note;
  return t;
}

VolterraSolution solve(const LevyModel& model, const UnivariatePotential& f, double b, double hi, std::size_t n,
                       unsigned columns) {
  if (!std::isfinite(b) || !std::isfinite(hi) || !(hi > b)) throw DomainError("volterra: need hi > b");
  if (n < 16) throw DomainError("volterra: need n >= 16 intervals");

  VolterraSolution sol;
  sol.b = b;
  sol.grid_step = (hi - b) / static_cast<double>(n);

  const auto kernel = sample_scale_kernel(model, 0.0, sol.grid_step, n);
  const auto moments = detail::cell_moments(f, b, sol.grid_step, n);

  std::vector<double> w, dw, z, dz;
  if (columns & kW) {
    w.resize(n + 1);
    dw.resize(n + 1);
  }
  if (columns & kZ) {
    z.resize(n + 1);
    dz.resize(n + 1);
  }
  detail::march(kernel, moments, w, dw, z, dz);

  if (columns & kW) {
    check_finite(w, "W", b, hi, n);
    check_finite(dw, "W'", b, hi, n);
    sol.base = empty_table(b, hi, n + 1, "W^(f)(u,b) solving the renewal equation with inhomogeneity W(u-b)");
    sol.base.w_values = std::move(w);
    sol.base.w_deriv = std::move(dw);
  }
  if (columns & kZ) {
    check_finite(z, "Z", b, hi, n);
    check_finite(dz, "Z'", b, hi, n);
    // Z^(f) lives in the Z columns; the W columns carry W^(f) when both were solved.
    sol.z_table = empty_table(b, hi, n + 1, "Z^(f)(u,b) solving the renewal equation with inhomogeneity 1");
    sol.z_table.z_values = std::move(z);
    sol.z_table.z_deriv = std::move(dz);
    if (columns & kW) {
      sol.z_table.w_values = sol.base.w_values;
      sol.z_table.w_deriv = sol.base.w_deriv;
    }
  }
  return sol;
}

}  // namespace

VolterraSolution solve_w_f(const LevyModel& model, const UnivariatePotential& f, double b, double hi, std::size_t n) {
  return solve(model, f, b, hi, n, kW);
}

VolterraSolution solve_z_f(const LevyModel& model, const UnivariatePotential& f, double b, double hi, std::size_t n) {
  // the Z table carries W^(f) columns too so it dumps as a full ScaleTable
  return solve(model, f, b, hi, n, kW | kZ);
}

VolterraSolution solve_renewal(const LevyModel& model, const UnivariatePotential& f, double b, double hi,
                               std::size_t n) {
  return solve(model, f, b, hi, n, kW | kZ);
}

}  // namespace snlp
