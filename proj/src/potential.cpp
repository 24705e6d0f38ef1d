#include "snlp/potential.hpp"

#include <cmath>
#include <sstream>

#include "snlp/errors.hpp"

namespace snlp {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void check_bound(double bound, const char* who) {
  if (!(bound >= 0.0) || !std::isfinite(bound)) throw DomainError(std::string(who) + ": bound must be finite and >= 0");
}

double checked_value(double v, double bound, const std::string& name) {
  if (!(v >= 0.0) || v > bound)
    throw DomainError("potential '" + name + "' returned " + fmt(v) + " outside [0, " + fmt(bound) + "]");
  return v;
}

std::pair<std::string, std::vector<double>> split_named(const std::string& text, const std::string& context) {
  const auto colon = text.find(':');
  std::vector<double> args;
  if (colon == std::string::npos) return {text, args};
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      args.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError(context + ": '" + item + "' is not a number");
    }
  }
  return {text.substr(0, colon), args};
}

void expect_args(const std::vector<double>& args, std::size_t lo, std::size_t hi, const std::string& what) {
  if (args.size() < lo || args.size() > hi) throw DomainError("potential: wrong argument count for " + what);
}

}  // namespace

UnivariatePotential::UnivariatePotential(Fn fn, double bound, std::vector<double> breaks, std::string name)
    : fn_(std::move(fn)), bound_(bound), breaks_(std::move(breaks)), name_(std::move(name)) {
  check_bound(bound_, "UnivariatePotential");
  if (!fn_) throw DomainError("UnivariatePotential: empty function");
}

UnivariatePotential UnivariatePotential::constant(double c) {
  check_bound(c, "const potential");
  return UnivariatePotential([c](double) { return c; }, c, {}, "const:" + fmt(c));
}

UnivariatePotential UnivariatePotential::level(double c, double r) {
  check_bound(c, "level potential");
  if (!std::isfinite(r)) throw DomainError("level potential: r must be finite");
  return UnivariatePotential([c, r](double x) { return x > r ? c : 0.0; }, c, {r}, "level:" + fmt(c) + "," + fmt(r));
}

double UnivariatePotential::operator()(double x) const { return checked_value(fn_(x), bound_, name_); }

BivariatePotential::BivariatePotential(Fn fn, double bound, SliceBreaks slice_breaks, LevelBreaks level_breaks,
                                       bool depends_on_supremum, std::string name)
    : fn_(std::move(fn)),
      bound_(bound),
      slice_breaks_(std::move(slice_breaks)),
      level_breaks_(std::move(level_breaks)),
      depends_on_supremum_(depends_on_supremum),
      name_(std::move(name)) {
  check_bound(bound_, "BivariatePotential");
  if (!fn_) throw DomainError("BivariatePotential: empty function");
}

BivariatePotential BivariatePotential::constant(double c) {
  check_bound(c, "const potential");
  return BivariatePotential([c](double, double) { return c; }, c, {}, {}, false, "const:" + fmt(c));
}

BivariatePotential BivariatePotential::reflected(double c, double cap) {
  check_bound(c, "reflected potential");
  check_bound(cap, "reflected potential cap");
  const double knee = c > 0.0 ? cap / c : 0.0;
  return BivariatePotential(
      [c, cap](double s, double x) { return std::min(c * std::max(s - x, 0.0), cap); }, cap,
      [knee, c](double s) { return c > 0.0 ? std::vector<double>{s - knee, s} : std::vector<double>{}; },
      [knee, c](double b) { return c > 0.0 ? std::vector<double>{b + knee} : std::vector<double>{}; }, true,
      "reflected:" + fmt(c) + "," + fmt(cap));
}

BivariatePotential BivariatePotential::indicator(double c, double r) {
  check_bound(c, "indicator potential");
  if (!std::isfinite(r)) throw DomainError("indicator potential: r must be finite");
  return BivariatePotential([c, r](double s, double x) { return s - x > r ? c : 0.0; }, c,
                            [r](double s) { return std::vector<double>{s - r}; },
                            [r](double b) { return std::vector<double>{b + r}; }, true,
                            "indicator:" + fmt(c) + "," + fmt(r));
}

BivariatePotential BivariatePotential::lifted(const UnivariatePotential& f) {
  auto breaks = f.breaks();
  return BivariatePotential([f](double, double x) { return f(x); }, f.bound(),
                            [breaks](double) { return breaks; }, [breaks](double) { return breaks; }, false,
                            f.name());
}

double BivariatePotential::operator()(double s, double x) const { return checked_value(fn_(s, x), bound_, name_); }

std::vector<double> BivariatePotential::slice_breaks(double s) const {
  return slice_breaks_ ? slice_breaks_(s) : std::vector<double>{};
}

std::vector<double> BivariatePotential::level_breaks(double b) const {
  return level_breaks_ ? level_breaks_(b) : std::vector<double>{};
}

UnivariatePotential BivariatePotential::frozen(double s) const {
  Fn fn = fn_;
  return UnivariatePotential([fn, s](double x) { return fn(s, x); }, bound_, slice_breaks(s), name_ + "@s");
}

BivariatePotential parse_potential(const std::string& text) {
  const auto [name, args] = split_named(text, "potential");
  if (name == "const") {
    expect_args(args, 1, 1, "const:q");
    return BivariatePotential::constant(args[0]);
  }
  if (name == "reflected") {
    expect_args(args, 1, 2, "reflected:c[,cap]");
    return BivariatePotential::reflected(args[0], args.size() == 2 ? args[1] : 2.0);
  }
  if (name == "indicator") {
    expect_args(args, 2, 2, "indicator:c,r");
    return BivariatePotential::indicator(args[0], args[1]);
  }
  if (name == "level") {
    expect_args(args, 2, 2, "level:c,r");
    return BivariatePotential::lifted(UnivariatePotential::level(args[0], args[1]));
  }
  throw DomainError("potential: unknown built-in '" + name + "'");
}

UnivariatePotential parse_univariate_potential(const std::string& text) {
  const auto [name, args] = split_named(text, "potential");
  if (name == "const") {
    expect_args(args, 1, 1, "const:q");
    return UnivariatePotential::constant(args[0]);
  }
  if (name == "level") {
    expect_args(args, 2, 2, "level:c,r");
    return UnivariatePotential::level(args[0], args[1]);
  }
  throw DomainError("potential: '" + name + "' depends on the supremum; expected const or level");
}

GFunction g_one() {
  return {[](double) { return 1.0; }, "const:1"};
}

GFunction parse_g(const std::string& text) {
  const auto [name, args] = split_named(text, "g");
  if (name == "const") {
    if (args.size() != 1) throw DomainError("g: const takes one value");
    const double c = args[0];
    return {[c](double) { return c; }, text};
  }
  if (name == "identity") {
    if (!args.empty()) throw DomainError("g: identity takes no arguments");
    return {[](double z) { return z; }, text};
  }
  if (name == "indicator") {
    if (args.size() != 2) throw DomainError("g: indicator takes lo,hi");
    const double lo = args[0], hi = args[1];
    return {[lo, hi](double z) { return z >= lo && z < hi ? 1.0 : 0.0; }, text};
  }
  throw DomainError("g: unknown built-in '" + name + "'");
}

}  // namespace snlp
