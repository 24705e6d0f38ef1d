#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "snlp/levy_model.hpp"
#include "snlp/potential.hpp"
#include "snlp/scale_classical.hpp"

namespace snlp {

/// Tables of W^{(f)}(., b) and Z^{(f)}(., b) on b = u_0 < ... < u_n = hi.
/// A table is left empty (n == 0) when its equation was not solved.
struct VolterraSolution {
  ScaleTable base;
  ScaleTable z_table;
  double b = 0.0;
  double grid_step = 0.0;
};

/// W^{(f)}(u, b) = W(u - b) + int_b^u W(u - z) f(z) W^{(f)}(z, b) dz, with the
/// derivative column from the differentiated equation. n is the interval count.
VolterraSolution solve_w_f(const LevyModel& model, const UnivariatePotential& f, double b, double hi, std::size_t n);

/// Z^{(f)}(u, b) = 1 + int_b^u W(u - z) f(z) Z^{(f)}(z, b) dz.
VolterraSolution solve_z_f(const LevyModel& model, const UnivariatePotential& f, double b, double hi, std::size_t n);

/// Both equations in one march.
VolterraSolution solve_renewal(const LevyModel& model, const UnivariatePotential& f, double b, double hi,
                               std::size_t n);

namespace detail {

/// Per-cell weights of f against the two linear hat functions of the cell:
///   m0[j] = int f(z)(1 - t) dz,  m1[j] = int f(z) t dz,  t = (z - z_j)/h.
/// Cells are split at f.breaks() so jumps in f cost no accuracy.
struct CellMoments {
  std::vector<double> m0;
  std::vector<double> m1;
  std::vector<std::size_t> active;  // cells with a non-zero moment
};
CellMoments cell_moments(const UnivariatePotential& f, double b, double step, std::size_t cells);

/// Explicit product-trapezoidal march. W(0) = 0 removes the diagonal term, so
/// node i only needs nodes < i (plus node i in the derivative sums). Output
/// spans must have cells + 1 entries; empty spans skip that column pair.
void march(const KernelSamples& kernel, const CellMoments& moments, std::span<double> w, std::span<double> dw,
           std::span<double> z, std::span<double> dz);

}  // namespace detail

}  // namespace snlp
