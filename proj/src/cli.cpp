#include "snlp/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "snlp/errors.hpp"
#include "snlp/report.hpp"
#include "snlp/scale_classical.hpp"
#include "snlp/scale_generalized.hpp"
#include "snlp/simulate.hpp"
#include "snlp/volterra.hpp"

namespace snlp {

namespace {

// A bad value for a named flag.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string model = "bm:0,1";
  std::optional<double> b, x, a;
  std::string potential = "const:0";
  std::string g = "const:1";
  double q = 0.0;
  std::size_t paths = 100000;
  bool paths_given = false;
  double dt = 1e-4;
  std::uint64_t seed = 1;
  bool bridge = true;
  bool antithetic = false;
  std::size_t grid_outer = 129;
  std::size_t grid_inner = 1024;
  double hi = 1.0;
  std::size_t nodes = 101;
  std::size_t bins = 8;
  std::size_t levels = 257;
  std::string out_path;
  std::string csv_path;
};

template <class F>
auto flag_value(const std::string& flag, F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

LevyModel model_of(const RunConfig& c) {
  return flag_value("--model", [&] { return parse_model(c.model); });
}

ExitSpec spec_of(const RunConfig& c) {
  for (const auto& [flag, v] : {std::pair{"--b", c.b}, std::pair{"--x", c.x}, std::pair{"--a", c.a}})
    if (!v) throw UsageError(std::string(flag) + ": required by '" + c.command + "'");
  return flag_value("--b/--x/--a", [&] { return ExitSpec::make(*c.b, *c.x, *c.a); });
}

QuadratureControl control_of(const RunConfig& c) {
  QuadratureControl q;
  if (c.grid_outer < 5) throw UsageError("--grid-outer: need at least 5 nodes");
  if (c.grid_inner < 16) throw UsageError("--grid-inner: need at least 16 intervals");
  q.n_outer = c.grid_outer;
  q.n_inner = c.grid_inner;
  return q;
}

MCConfig mc_of(const RunConfig& c) {
  if (c.paths < 100) throw UsageError("--paths: need at least 100 paths");
  if (!(c.dt > 0.0)) throw UsageError("--dt: must be positive");
  if (c.antithetic && c.paths % 2 != 0) throw UsageError("--paths: antithetic sampling needs an even count");
  MCConfig m;
  m.dt = c.dt;
  m.n_paths = c.paths;
  m.seed = c.seed;
  m.bridge_correction = c.bridge;
  m.antithetic = c.antithetic;
  return m;
}

json header(const RunConfig& c) {
  return {{"schema", kSchemaVersion}, {"command", c.command}, {"model", model_of(c)}};
}

void write_csv_file(const std::string& path, const auto& writer) {
  std::ofstream f(path);
  if (!f) throw UsageError("--csv: cannot open '" + path + "'");
  writer(f);
}

json cmd_scale_table(const RunConfig& c) {
  const auto model = model_of(c);
  if (!(c.hi > 0.0)) throw UsageError("--hi: must be positive");
  if (c.nodes < 2) throw UsageError("--nodes: need at least 2 nodes");
  if (c.q < 0.0) throw UsageError("--q: must be non-negative");
  json j = header(c);
  ScaleTable table;
  if (c.potential == "const:0") {
    table = scale_table(model, c.q, c.hi, c.nodes, true);
  } else {
    // W^{(f)}(., b) and Z^{(f)}(., b) on [b, b + hi] by the renewal equations
    const auto f = flag_value("--potential", [&] { return parse_univariate_potential(c.potential); });
    const double b = c.b.value_or(0.0);
    if (c.nodes < 17) throw UsageError("--nodes: the renewal solver needs at least 17 nodes");
    table = solve_renewal(model, f, b, b + c.hi, c.nodes - 1).z_table;
    j["b"] = b;
    j["potential"] = c.potential;
  }
  j["q"] = c.q;
  j["table"] = table;
  if (!c.csv_path.empty()) write_csv_file(c.csv_path, [&](std::ostream& os) { write_csv(os, table); });
  return j;
}

json cmd_exit(const RunConfig& c) {
  const auto model = model_of(c);
  const auto spec = spec_of(c);
  const auto F = flag_value("--potential", [&] { return parse_potential(c.potential); });
  const auto g = flag_value("--g", [&] { return parse_g(c.g); });
  const auto r = evaluate_exit(model, F, g, spec, control_of(c));
  json j = r;
  j.update(header(c));
  j["spec"] = spec;
  j["potential"] = c.potential;
  j["g"] = c.g;
  return j;
}

json cmd_conditional(const RunConfig& c) {
  const auto model = model_of(c);
  const auto spec = spec_of(c);
  const auto F = flag_value("--potential", [&] { return parse_potential(c.potential); });
  if (c.bins < 4) throw UsageError("--bins: need at least 4 bins");
  const auto control = control_of(c);
  json j = header(c);
  j["spec"] = spec;
  j["potential"] = c.potential;
  j["atom"] = supremum_atom(model, spec);
  if (c.paths_given) {
    j["mc"] = conditional_mc(model, F, spec, mc_of(c), c.bins, control);
    return j;
  }
  const double width = (spec.a - spec.x) / static_cast<double>(c.bins);
  std::vector<double> zs;
  for (std::size_t k = 0; k < c.bins; ++k) zs.push_back(spec.x + (static_cast<double>(k) + 0.5) * width);
  zs.push_back(spec.a);
  const auto curve = conditional_curve(model, F, spec, zs, control);
  json points = json::array();
  for (std::size_t k = 0; k < zs.size(); ++k) {
    json p = {{"z", zs[k]}, {"conditional_laplace", curve[k]}};
    if (k < c.bins) p["density"] = supremum_density(model, spec, zs[k]);
    points.push_back(std::move(p));
  }
  j["curve"] = points;
  return j;
}

json cmd_mc_verify(const RunConfig& c) {
  const auto model = model_of(c);
  const auto spec = spec_of(c);
  const auto F = flag_value("--potential", [&] { return parse_potential(c.potential); });
  const auto g = flag_value("--g", [&] { return parse_g(c.g); });
  const auto cfg = mc_of(c);
  const auto det = evaluate_exit(model, F, g, spec, control_of(c));
  const auto mc = run_exit_mc(model, F, g, {}, spec, cfg, !c.csv_path.empty());
  const auto report = verify_report(
      {{"up_laplace", det.up_laplace}, {"down_value", det.down_value}, {"p_up", classical_exit_up(model, 0.0, spec)}},
      {{"up_laplace", mc.up_laplace}, {"down_value", mc.down_value}, {"p_up", mc.p_up}});
  if (!c.csv_path.empty()) write_csv_file(c.csv_path, [&](std::ostream& os) { write_samples_csv(os, mc.samples); });
  json j = header(c);
  j["spec"] = spec;
  j["potential"] = c.potential;
  j["g"] = c.g;
  j["deterministic"] = det;
  j["mc"] = mc;
  j["report"] = report;
  return j;
}

json cmd_local_time(const RunConfig& c) {
  const auto model = model_of(c);
  const auto spec = spec_of(c);
  const auto f = flag_value("--potential", [&] { return parse_univariate_potential(c.potential); });
  json j = header(c);
  j["spec"] = spec;
  j["potential"] = c.potential;
  j["laplace"] = local_time_laplace(model, f, spec, control_of(c));
  if (c.paths_given) {
    if (c.levels < 8) throw UsageError("--levels: need at least 8 levels");
    j["mc"] = flag_value("--dt/--levels", [&] { return occupation_mc(model, f, spec, mc_of(c), c.levels); });
  }
  return j;
}

void build(CLI::App& app, RunConfig& c) {
  app.description("Scale functions and two-sided exit functionals of spectrally negative Levy processes.");
  app.add_option("command", c.command, "scale-table | exit | conditional | mc-verify | local-time")
      ->required()
      ->check(CLI::IsMember({"scale-table", "exit", "conditional", "mc-verify", "local-time"}));
  app.add_option("--model", c.model, "bm:mu,sigma or ejd:mu,sigma,rate,jump_mean")->capture_default_str();
  app.add_option("--b", c.b, "lower barrier");
  app.add_option("--x", c.x, "starting point");
  app.add_option("--a", c.a, "upper barrier");
  app.add_option("--potential", c.potential,
                 "const:q | reflected:c[,cap] | indicator:c,r | level:c,r (scale-table and local-time: const, level)")
      ->capture_default_str();
  app.add_option("--g", c.g, "const:c | identity | indicator:lo,hi")->capture_default_str();
  app.add_option("--q", c.q, "discount rate for scale-table")->capture_default_str();
  app.add_option("--paths", c.paths, "Monte Carlo paths (conditional and local-time run MC only when set)")
      ->capture_default_str();
  app.add_option("--dt", c.dt, "Monte Carlo time step")->capture_default_str();
  app.add_option("--seed", c.seed, "Monte Carlo seed")->envname("SNLP_SCALE_SEED")->capture_default_str();
  app.add_option("--bridge", c.bridge, "Brownian-bridge barrier correction (true/false)")->capture_default_str();
  app.add_flag("--antithetic", c.antithetic, "antithetic Gaussian pairs");
  app.add_option("--grid-outer", c.grid_outer, "Simpson nodes over the supremum levels")->capture_default_str();
  app.add_option("--grid-inner", c.grid_inner, "renewal-solver intervals per level")->capture_default_str();
  app.add_option("--hi", c.hi, "scale-table: grid length")->capture_default_str();
  app.add_option("--nodes", c.nodes, "scale-table: grid nodes")->capture_default_str();
  app.add_option("--bins", c.bins, "conditional: supremum bins")->capture_default_str();
  app.add_option("--levels", c.levels, "local-time: occupation levels")->capture_default_str();
  app.add_option("--out", c.out_path, "write JSON here instead of stdout");
  app.add_option("--csv", c.csv_path, "scale-table: CSV table; mc-verify: raw samples");
  app.set_config("--config", "", "flat key = value file; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"", "snlp-scale"};
  RunConfig c;
  build(app, c);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  c.paths_given = app.get_option("--paths")->count() > 0;

  try {
    json j;
    if (c.command == "scale-table") j = cmd_scale_table(c);
    else if (c.command == "exit") j = cmd_exit(c);
    else if (c.command == "conditional") j = cmd_conditional(c);
    else if (c.command == "mc-verify") j = cmd_mc_verify(c);
    else j = cmd_local_time(c);

    if (c.out_path.empty()) {
      out << j.dump(2) << "\n";
    } else {
      std::ofstream f(c.out_path);
      if (!f) throw UsageError("--out: cannot open '" + c.out_path + "'");
      f << j.dump(2) << "\n";
    }
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    json diag = json::parse(e.diagnostics(), nullptr, false);
    if (diag.is_discarded()) diag = e.diagnostics();
    err << json{{"error", e.what()}, {"diagnostics", diag}}.dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << json{{"error", e.what()}, {"diagnostics", json::object()}}.dump(2) << "\n";
    return 1;
  }
}

}  // namespace snlp
