#pragma once

#include <functional>
#include <string>
#include <vector>

namespace snlp {

/// Non-negative, bounded f(x). Every evaluation is checked against the
/// declared bound; a violation is a DomainError.
///
/// `breaks` lists points where f may jump or kink. The renewal solver splits
/// its cell moments there, which keeps the scheme second order for
/// piecewise-smooth potentials.
class UnivariatePotential {
 public:
  using Fn = std::function<double(double)>;

  UnivariatePotential(Fn fn, double bound, std::vector<double> breaks = {}, std::string name = "custom");

  static UnivariatePotential constant(double c);
  /// c * 1{x > r}
  static UnivariatePotential level(double c, double r);

  double operator()(double x) const;
  double bound() const noexcept { return bound_; }
  const std::vector<double>& breaks() const noexcept { return breaks_; }
  const std::string& name() const noexcept { return name_; }
  bool is_zero() const noexcept { return bound_ == 0.0; }

 private:
  Fn fn_;
  double bound_;
  std::vector<double> breaks_;
  std::string name_;
};

/// Non-negative, bounded F(s, x) of (running supremum, position).
class BivariatePotential {
 public:
  using Fn = std::function<double(double s, double x)>;
  /// x-points where x -> F(s, x) is not smooth, for a fixed level s.
  using SliceBreaks = std::function<std::vector<double>(double s)>;
  /// s-levels where the frozen slices change shape (given the lower barrier b).
  using LevelBreaks = std::function<std::vector<double>(double b)>;

  BivariatePotential(Fn fn, double bound, SliceBreaks slice_breaks = {}, LevelBreaks level_breaks = {},
                     bool depends_on_supremum = true, std::string name = "custom");

  static BivariatePotential constant(double c);
  /// min(c * (s - x), cap): a potential of the reflected process S - X.
  static BivariatePotential reflected(double c, double cap);
  /// c * 1{s - x > r}
  static BivariatePotential indicator(double c, double r);
  /// F(s, x) := f(x).
  static BivariatePotential lifted(const UnivariatePotential& f);

  double operator()(double s, double x) const;
  double bound() const noexcept { return bound_; }
  bool depends_on_supremum() const noexcept { return depends_on_supremum_; }
  const std::string& name() const noexcept { return name_; }

  std::vector<double> slice_breaks(double s) const;
  std::vector<double> level_breaks(double b) const;

  /// The frozen slice x -> F(s, x).
  UnivariatePotential frozen(double s) const;

 private:
  Fn fn_;
  double bound_;
  SliceBreaks slice_breaks_;
  LevelBreaks level_breaks_;
  bool depends_on_supremum_;
  std::string name_;
};

/// Named built-ins: "const:q", "reflected:c[,cap]" (cap defaults to 2),
/// "indicator:c,r", "level:c,r".
BivariatePotential parse_potential(const std::string& text);
/// Supremum-free built-ins only: "const:q", "level:c,r".
UnivariatePotential parse_univariate_potential(const std::string& text);

/// Bounded g(z) for the down-exit functional.
struct GFunction {
  std::function<double(double)> fn;
  std::string name;
  double operator()(double z) const { return fn(z); }
};
/// "const:c", "identity" (g(z) = z), "indicator:lo,hi" (1 on [lo, hi)).
GFunction parse_g(const std::string& text);
GFunction g_one();

}  // namespace snlp
