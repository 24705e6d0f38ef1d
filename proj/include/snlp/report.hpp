#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "snlp/exit_spec.hpp"
#include "snlp/levy_model.hpp"
#include "snlp/scale_classical.hpp"
#include "snlp/scale_generalized.hpp"
#include "snlp/simulate.hpp"

namespace snlp {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// The model is written as its "fam:p1,p2[,p3,p4]" string.
void to_json(json& j, const LevyModel& model);
void from_json(const json& j, LevyModel& model);

void to_json(json& j, const ExitSpec& spec);
void from_json(const json& j, ExitSpec& spec);

void to_json(json& j, const Estimate& e);
void from_json(const json& j, Estimate& e);

void to_json(json& j, const ExitDiagnostics& d);
void from_json(const json& j, ExitDiagnostics& d);

/// {"schema":1, "up_laplace", "down_value", "iota":[[s, iota]...], "kappa":[[z, kappa]...], "diagnostics":{...}}
void to_json(json& j, const GeneralizedScaleResult& r);
void from_json(const json& j, GeneralizedScaleResult& r);

void to_json(json& j, const ScaleTable& t);
void from_json(const json& j, ScaleTable& t);

void to_json(json& j, const ExitMCResult& r);
void to_json(json& j, const ConditionalMCResult& r);
void to_json(json& j, const OccupationMCResult& r);

struct VerifyEntry {
  std::string name;
  double deterministic = 0.0;
  Estimate mc;
  double zscore = 0.0;
  bool pass = false;
  bool operator==(const VerifyEntry&) const = default;
};

struct VerifyReport {
  std::vector<VerifyEntry> entries;
  bool all_pass = false;
};

void to_json(json& j, const VerifyEntry& e);
void from_json(const json& j, VerifyEntry& e);
void to_json(json& j, const VerifyReport& r);
void from_json(const json& j, VerifyReport& r);

/// Pairs deterministic values with MC estimates by name; |z| < 3 passes.
/// Throws DomainError when either side is empty or the name sets differ.
VerifyReport verify_report(const std::vector<std::pair<std::string, double>>& deterministic,
                           const std::vector<std::pair<std::string, Estimate>>& mc);

}  // namespace snlp
