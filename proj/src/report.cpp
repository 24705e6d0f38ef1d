#include "snlp/report.hpp"

#include <cmath>
#include <map>

#include "snlp/errors.hpp"

namespace snlp {

namespace {

// JSON has no infinities; they are written as null and read back as inf.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

json pairs(const std::vector<std::pair<double, double>>& v) {
  json arr = json::array();
  for (const auto& [s, y] : v) arr.push_back({s, y});
  return arr;
}

std::vector<std::pair<double, double>> unpairs(const json& j) {
  std::vector<std::pair<double, double>> v;
  for (const auto& p : j) v.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  return v;
}

}  // namespace

void to_json(json& j, const LevyModel& model) { j = format_model(model); }
void from_json(const json& j, LevyModel& model) { model = parse_model(j.get<std::string>()); }

void to_json(json& j, const ExitSpec& spec) { j = {{"b", spec.b}, {"x", spec.x}, {"a", spec.a}}; }
void from_json(const json& j, ExitSpec& spec) {
  spec = ExitSpec::make(j.at("b").get<double>(), j.at("x").get<double>(), j.at("a").get<double>());
}

void to_json(json& j, const Estimate& e) {
  j = {{"mean", e.mean}, {"std_error", e.std_error}, {"n", e.n}, {"elapsed", e.elapsed}};
}
void from_json(const json& j, Estimate& e) {
  j.at("mean").get_to(e.mean);
  j.at("std_error").get_to(e.std_error);
  j.at("n").get_to(e.n);
  j.at("elapsed").get_to(e.elapsed);
}

void to_json(json& j, const ExitDiagnostics& d) {
  j = {{"n_outer", d.n_outer},
       {"n_inner", d.n_inner},
       {"doublings", d.doublings},
       {"last_rel_change", d.last_rel_change},
       {"converged", d.converged},
       {"classical_up", d.classical_up},
       {"h_factor", d.h_factor},
       {"extrapolated_nodes", d.extrapolated_nodes}};
}
void from_json(const json& j, ExitDiagnostics& d) {
  j.at("n_outer").get_to(d.n_outer);
  j.at("n_inner").get_to(d.n_inner);
  j.at("doublings").get_to(d.doublings);
  j.at("last_rel_change").get_to(d.last_rel_change);
  j.at("converged").get_to(d.converged);
  j.at("classical_up").get_to(d.classical_up);
  j.at("h_factor").get_to(d.h_factor);
  j.at("extrapolated_nodes").get_to(d.extrapolated_nodes);
}

void to_json(json& j, const GeneralizedScaleResult& r) {
  j = {{"schema", kSchemaVersion},        {"up_laplace", r.up_laplace}, {"down_value", r.down_value},
       {"iota", pairs(r.iota_grid)},      {"kappa", pairs(r.kappa_grid)}, {"diagnostics", r.diagnostics}};
}
void from_json(const json& j, GeneralizedScaleResult& r) {
  if (j.value("schema", 0) != kSchemaVersion) throw DomainError("json: unsupported schema version");
  j.at("up_laplace").get_to(r.up_laplace);
  j.at("down_value").get_to(r.down_value);
  r.iota_grid = unpairs(j.at("iota"));
  r.kappa_grid = unpairs(j.at("kappa"));
  j.at("diagnostics").get_to(r.diagnostics);
}

void to_json(json& j, const ScaleTable& t) {
  j = {{"schema", kSchemaVersion}, {"grid_lo", t.grid_lo},    {"grid_hi", t.grid_hi},
       {"n", t.n},                 {"W", t.w_values},         {"Wprime", t.w_deriv},
       {"Z", t.z_values},          {"Zprime", t.z_deriv},     {"normalization", t.normalization_note}};
}
void from_json(const json& j, ScaleTable& t) {
  if (j.value("schema", 0) != kSchemaVersion) throw DomainError("json: unsupported schema version");
  j.at("grid_lo").get_to(t.grid_lo);
  j.at("grid_hi").get_to(t.grid_hi);
  j.at("n").get_to(t.n);
  j.at("W").get_to(t.w_values);
  j.at("Wprime").get_to(t.w_deriv);
  j.at("Z").get_to(t.z_values);
  j.at("Zprime").get_to(t.z_deriv);
  j.at("normalization").get_to(t.normalization_note);
}

void to_json(json& j, const ExitMCResult& r) {
  j = {{"schema", kSchemaVersion},     {"up_laplace", r.up_laplace}, {"down_value", r.down_value},
       {"p_up", r.p_up},               {"n_up", r.n_up},             {"n_down", r.n_down},
       {"n_censored", r.n_censored},   {"warnings", r.warnings}};
}

void to_json(json& j, const ConditionalMCResult& r) {
  json bins = json::array();
  for (const auto& b : r.bins) {
    json e = {{"lo", b.lo}, {"hi", b.hi}, {"midpoint", b.midpoint}, {"deterministic", b.deterministic},
              {"deterministic_bin_mean", b.deterministic_bin_mean},
              {"empty", b.empty}};
    if (!b.empty) {
      e["mc"] = b.mc;
      e["zscore"] = finite_or_null(b.zscore);
    }
    bins.push_back(std::move(e));
  }
  j = {{"schema", kSchemaVersion},
       {"bins", bins},
       {"top", {{"deterministic", r.top_deterministic}, {"mc", r.top_mc}, {"zscore", finite_or_null(r.top_zscore)}}},
       {"non_empty", r.non_empty},
       {"within_3se", r.within_3se},
       {"warnings", r.warnings}};
}

void to_json(json& j, const OccupationMCResult& r) {
  j = {{"schema", kSchemaVersion},
       {"time_integral", r.time_integral},
       {"occupation_integral", r.occupation_integral},
       {"laplace_time", r.laplace_time},
       {"laplace_occupation", r.laplace_occupation},
       {"discrepancy", r.discrepancy},
       {"bandwidth", r.bandwidth},
       {"n_levels", r.n_levels}};
}

void to_json(json& j, const VerifyEntry& e) {
  j = {{"name", e.name}, {"deterministic", e.deterministic}, {"mc", e.mc}, {"zscore", finite_or_null(e.zscore)},
       {"pass", e.pass}};
}
void from_json(const json& j, VerifyEntry& e) {
  j.at("name").get_to(e.name);
  j.at("deterministic").get_to(e.deterministic);
  j.at("mc").get_to(e.mc);
  e.zscore = number_or_inf(j.at("zscore"));
  j.at("pass").get_to(e.pass);
}

void to_json(json& j, const VerifyReport& r) {
  j = {{"schema", kSchemaVersion}, {"entries", r.entries}, {"all_pass", r.all_pass}};
}
void from_json(const json& j, VerifyReport& r) {
  if (j.value("schema", 0) != kSchemaVersion) throw DomainError("json: unsupported schema version");
  j.at("entries").get_to(r.entries);
  j.at("all_pass").get_to(r.all_pass);
}

VerifyReport verify_report(const std::vector<std::pair<std::string, double>>& deterministic,
                           const std::vector<std::pair<std::string, Estimate>>& mc) {
  if (deterministic.empty() || mc.empty()) throw DomainError("verify: empty estimand set");
  std::map<std::string, Estimate> by_name;
  for (const auto& [name, e] : mc)
    if (!by_name.emplace(name, e).second) throw DomainError("verify: duplicate MC estimand '" + name + "'");
  if (by_name.size() != deterministic.size()) throw DomainError("verify: estimand sets differ in size");

  VerifyReport report;
  report.all_pass = true;
  for (const auto& [name, det] : deterministic) {
    const auto it = by_name.find(name);
    if (it == by_name.end()) throw DomainError("verify: no MC estimate for '" + name + "'");
    VerifyEntry e{name, det, it->second, zscore(det, it->second), false};
    e.pass = std::abs(e.zscore) < 3.0;
    report.all_pass = report.all_pass && e.pass;
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace snlp
