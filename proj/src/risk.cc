// Copyright 2026 The cjrisk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cjrisk/risk.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "cjrisk/error.h"
#include "fmt/format.h"
#include "json.hpp"

namespace cjrisk {
namespace {

bool IsProbability(double p) { return std::isfinite(p) && p >= 0 && p <= 1; }

// 1 - (1 - p)^k without cancellation for small p.
double AnyOf(double p, double k) {
  if (k == 0 || p == 0) return 0.0;
  if (p == 1) return 1.0;
  return -std::expm1(k * std::log1p(-p));
}

}  // namespace

void VerifierRates::Validate() const {
  if (!IsProbability(p_fa)) throw ValidationError("P_FA must be in [0, 1]");
  if (!IsProbability(p_fr)) throw ValidationError("P_FR must be in [0, 1]");
  if (n < 1) throw ValidationError("gallery size N must be at least 1");
}

double POpen(const VerifierRates& rates) {
  rates.Validate();
  if (rates.n == 1) return rates.p_fa;
  return AnyOf(rates.p_fa, static_cast<double>(rates.n));
}

double PClose(const VerifierRates& rates) {
  rates.Validate();
  return rates.p_fr * AnyOf(rates.p_fa, static_cast<double>(rates.n - 1));
}

FpirPair FpirApprox(const VerifierRates& rates) {
  rates.Validate();
  const double n = static_cast<double>(rates.n);
  return {std::min(1.0, n * rates.p_fa),
          rates.p_fr * std::min(1.0, (n - 1) * rates.p_fa)};
}

std::string ToString(FpirMode mode) {
  return mode == FpirMode::kExact ? "exact" : "approximate";
}

std::string ToString(AlphaKind kind) {
  return kind == AlphaKind::kCoefficientWeighted ? "coefficient_weighted"
                                                 : "unweighted";
}

FpirMode ParseFpirMode(const std::string& s) {
  if (s == "exact") return FpirMode::kExact;
  if (s == "approximate" || s == "approx") return FpirMode::kApproximate;
  throw ValidationError("unknown FPIR mode '" + s + "'");
}

AlphaKind ParseAlphaKind(const std::string& s) {
  if (s == "coefficient_weighted" || s == "weighted") {
    return AlphaKind::kCoefficientWeighted;
  }
  if (s == "unweighted") return AlphaKind::kUnweighted;
  throw ValidationError("unknown alpha model '" + s + "'");
}

AlphaModel AlphaModel::CoefficientWeighted(const UtilityEstimate& estimate) {
  std::map<std::string, double> coefs;
  for (const auto& r : estimate.rows) coefs[r.attribute] = r.coef;
  return CoefficientWeighted(coefs);
}

AlphaModel AlphaModel::CoefficientWeighted(
    const std::map<std::string, double>& coefficients) {
  AlphaModel m;
  m.kind = AlphaKind::kCoefficientWeighted;
  for (const auto& [name, coef] : coefficients) m.weights[name] = std::fabs(coef);
  return m;
}

AlphaModel AlphaModel::Unweighted(const AttributeSchema& schema) {
  AlphaModel m;
  m.kind = AlphaKind::kUnweighted;
  for (const auto& a : schema.attributes()) m.weights[a.name] = 1.0;
  return m;
}

double Alpha(const LevelMap& levels, const AlphaModel& model,
             const AttributeSchema& schema) {
  ValidateLevels(levels, schema);
  double applied = 0.0, total = 0.0;
  bool any_positive = false;
  for (const auto& [name, w] : model.weights) {
    auto a = schema.IndexOf(name);
    if (!a) throw ModelError("alpha weight for unknown attribute '" + name + "'");
    if (!(w >= 0) || !std::isfinite(w)) {
      throw ModelError("alpha weight for '" + name + "' must be nonnegative");
    }
    auto it = levels.find(name);
    if (it == levels.end()) {
      throw ModelError("no level given for weighted attribute '" + name + "'");
    }
    const double span = static_cast<double>(schema[*a].level_count() - 1);
    double x = static_cast<double>(it->second) / span;
    if (model.perceived_value) x = model.perceived_value(x);
    applied += w * span * x;
    total += w * span;
    any_positive = any_positive || w > 0;
  }
  if (!any_positive || total <= 0) {
    throw ModelError("alpha model has no positive weight");
  }
  return std::clamp(1.0 - applied / total, 0.0, 1.0);
}

double CombineRisk(double alpha, const FpirPair& fpir, double c_open,
                   double c_close) {
  return c_open * alpha * fpir.open + c_close * (1.0 - alpha) * fpir.close;
}

RiskResult CIdentify(const RiskScenario& scenario, const AlphaModel& model,
                     const AttributeSchema& schema, FpirMode mode) {
  if (!std::isfinite(scenario.c_open) || !std::isfinite(scenario.c_close) ||
      scenario.c_open < 0 || scenario.c_close < 0) {
    throw ValidationError("costs must be finite and nonnegative");
  }
  RiskResult r;
  r.mode = mode;
  r.alpha = Alpha(scenario.levels, model, schema);
  FpirPair fpir = mode == FpirMode::kExact
                      ? FpirPair{POpen(scenario.rates), PClose(scenario.rates)}
                      : FpirApprox(scenario.rates);
  r.fpir_open = fpir.open;
  r.fpir_close = fpir.close;
  r.c_identify = CombineRisk(r.alpha, fpir, scenario.c_open, scenario.c_close);
  return r;
}

double CostRatioBeta(double c_miss, double c_false_alarm, double p_target) {
  if (!(p_target > 0 && p_target < 1)) {
    throw DomainError("P_Target must lie strictly between 0 and 1");
  }
  if (!(c_miss > 0) || !(c_false_alarm > 0)) {
    throw DomainError("detection costs must be positive");
  }
  return (c_false_alarm / c_miss) * (1.0 - p_target) / p_target;
}

double CNorm(double p_miss, double p_false_alarm, double c_miss,
             double c_false_alarm, double p_target) {
  if (!IsProbability(p_miss) || !IsProbability(p_false_alarm)) {
    throw DomainError("miss and false-alarm rates must be probabilities");
  }
  return p_miss +
         CostRatioBeta(c_miss, c_false_alarm, p_target) * p_false_alarm;
}

std::optional<double> ParseRate(const std::string& label) {
  const char* s = label.c_str();
  char* end = nullptr;
  if (auto caret = label.find('^'); caret != std::string::npos) {
    double base = std::strtod(s, &end);
    if (end != s + caret) return std::nullopt;
    const char* exp_start = s + caret + 1;
    double exponent = std::strtod(exp_start, &end);
    if (end == exp_start || *end != '\0') return std::nullopt;
    // Exact decimal for powers of ten, e.g. "10^-4" == 1e-4.
    if (base == 10 && exponent == std::floor(exponent)) {
      return std::strtod(("1e" + std::string(exp_start)).c_str(), nullptr);
    }
    return std::pow(base, exponent);
  }
  double v = std::strtod(s, &end);
  if (end == s || *end != '\0') return std::nullopt;
  return v;
}

std::vector<FarSetting> FarSettings(const AttributeSchema& schema,
                                    const std::string& far_attribute) {
  const std::size_t a = schema.RequireIndex(far_attribute);
  std::vector<FarSetting> out;
  for (std::size_t k = 0; k < schema[a].level_count(); ++k) {
    const std::string& label = schema[a].levels[k];
    auto v = ParseRate(label);
    if (!v || *v < 0 || *v > 1) {
      throw ValidationError("level '" + label + "' of '" + far_attribute +
                            "' is not a rate");
    }
    out.push_back({k, label, *v});
  }
  return out;
}

const RiskResult& RiskGrid::At(const std::string& use_case,
                               const std::string& far_label) const {
  for (std::size_t f = 0; f < far_settings.size(); ++f) {
    if (far_settings[f].label != far_label) continue;
    for (std::size_t u = 0; u < use_cases.size(); ++u) {
      if (use_cases[u] == use_case) return cells[f][u];
    }
  }
  throw NotFoundError("no grid cell (" + use_case + ", " + far_label + ")");
}

bool RiskGrid::FlaggedAt(const std::string& use_case,
                         const std::string& far_label) const {
  for (std::size_t f = 0; f < far_settings.size(); ++f) {
    if (far_settings[f].label != far_label) continue;
    for (std::size_t u = 0; u < use_cases.size(); ++u) {
      if (use_cases[u] == use_case) return !flagged.empty() && flagged[f][u];
    }
  }
  throw NotFoundError("no grid cell (" + use_case + ", " + far_label + ")");
}

RiskGrid CompareUseCases(const GridRequest& request, const AlphaModel& model,
                         const AttributeSchema& schema) {
  const std::size_t far_index = schema.RequireIndex(request.far_attribute);
  RiskGrid grid;
  grid.far_settings = request.far_settings;
  for (const auto& uc : request.use_cases) {
    ValidateLevels(uc.levels, schema);
    grid.use_cases.push_back(uc.name);
  }
  for (const auto& far : request.far_settings) {
    if (far.level >= schema[far_index].level_count()) {
      throw ValidationError("FAR level " + std::to_string(far.level) +
                            " out of range");
    }
    std::vector<RiskResult> row;
    for (const auto& uc : request.use_cases) {
      RiskScenario s;
      s.levels = uc.levels;
      s.levels[request.far_attribute] = far.level;
      s.rates = {far.p_fa, request.p_fr, request.n};
      s.c_open = request.c_open;
      s.c_close = request.c_close;
      row.push_back(CIdentify(s, model, schema, request.mode));
    }
    grid.cells.push_back(std::move(row));
  }

  if (request.reference) {
    std::optional<std::size_t> rf, ru;
    for (std::size_t f = 0; f < grid.far_settings.size(); ++f) {
      if (grid.far_settings[f].label == request.reference->far_label) rf = f;
    }
    for (std::size_t u = 0; u < grid.use_cases.size(); ++u) {
      if (grid.use_cases[u] == request.reference->use_case) ru = u;
    }
    if (!rf || !ru) {
      throw ValidationError("reference cell (" + request.reference->use_case +
                            ", " + request.reference->far_label +
                            ") is not in the grid");
    }
    grid.reference = {{*rf, *ru}};
    const double ref = grid.cells[*rf][*ru].c_identify;
    grid.flagged.assign(grid.far_settings.size(),
                        std::vector<bool>(grid.use_cases.size(), false));
    for (std::size_t f = 0; f < grid.far_settings.size(); ++f) {
      for (std::size_t u = 0; u < grid.use_cases.size(); ++u) {
        grid.flagged[f][u] = grid.cells[f][u].c_identify < ref;
      }
    }
  }
  return grid;
}

std::string GridToCsv(const RiskGrid& grid) {
  std::string out = "FAR";
  for (const auto& uc : grid.use_cases) out += "," + uc;
  out += "\n";
  for (std::size_t f = 0; f < grid.far_settings.size(); ++f) {
    out += grid.far_settings[f].label;
    for (const auto& cell : grid.cells[f]) {
      out += fmt::format(",{}", cell.c_identify);
    }
    out += "\n";
  }
  return out;
}

nlohmann::json ResultToJson(const RiskResult& r) {
  return {{"alpha", r.alpha},
          {"fpir_open", r.fpir_open},
          {"fpir_close", r.fpir_close},
          {"c_identify", r.c_identify},
          {"mode", ToString(r.mode)}};
}

nlohmann::json GridToJson(const RiskGrid& grid) {
  nlohmann::json fars = nlohmann::json::array();
  for (const auto& f : grid.far_settings) {
    fars.push_back({{"level", f.level}, {"label", f.label}, {"p_fa", f.p_fa}});
  }
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t f = 0; f < grid.far_settings.size(); ++f) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t u = 0; u < grid.use_cases.size(); ++u) {
      nlohmann::json cell = ResultToJson(grid.cells[f][u]);
      cell["flagged"] = !grid.flagged.empty() && grid.flagged[f][u];
      row.push_back(std::move(cell));
    }
    cells.push_back(std::move(row));
  }
  nlohmann::json doc = {{"use_cases", grid.use_cases},
                        {"far_settings", fars},
                        {"cells", cells}};
  if (grid.reference) {
    doc["reference"] = {
        {"use_case", grid.use_cases[grid.reference->second]},
        {"far_label", grid.far_settings[grid.reference->first].label}};
  } else {
    doc["reference"] = nullptr;
  }
  return doc;
}

RiskGrid GridFromJson(const nlohmann::json& doc) {
  RiskGrid grid;
  try {
    grid.use_cases = doc.at("use_cases").get<std::vector<std::string>>();
    for (const auto& f : doc.at("far_settings")) {
      grid.far_settings.push_back({f.at("level").get<std::size_t>(),
                                   f.at("label").get<std::string>(),
                                   f.at("p_fa").get<double>()});
    }
    const auto& cells = doc.at("cells");
    if (cells.size() != grid.far_settings.size()) {
      throw ValidationError("risk grid has wrong number of rows");
    }
    bool any_flag_data = false;
    std::vector<std::vector<bool>> flagged;
    for (const auto& row : cells) {
      if (row.size() != grid.use_cases.size()) {
        throw ValidationError("risk grid has wrong number of columns");
      }
      std::vector<RiskResult> out_row;
      std::vector<bool> flag_row;
      for (const auto& c : row) {
        RiskResult r;
        r.alpha = c.at("alpha").get<double>();
        r.fpir_open = c.at("fpir_open").get<double>();
        r.fpir_close = c.at("fpir_close").get<double>();
        r.c_identify = c.at("c_identify").get<double>();
        r.mode = ParseFpirMode(c.at("mode").get<std::string>());
        flag_row.push_back(c.at("flagged").get<bool>());
        out_row.push_back(r);
      }
      grid.cells.push_back(std::move(out_row));
      flagged.push_back(std::move(flag_row));
    }
    const auto& ref = doc.at("reference");
    if (!ref.is_null()) {
      const auto uc = ref.at("use_case").get<std::string>();
      const auto fl = ref.at("far_label").get<std::string>();
      std::optional<std::size_t> rf, ru;
      for (std::size_t f = 0; f < grid.far_settings.size(); ++f) {
        if (grid.far_settings[f].label == fl) rf = f;
      }
      for (std::size_t u = 0; u < grid.use_cases.size(); ++u) {
        if (grid.use_cases[u] == uc) ru = u;
      }
      if (!rf || !ru) throw IntegrityError("reference cell not in grid");
      grid.reference = {{*rf, *ru}};
      any_flag_data = true;
    }
    if (any_flag_data) grid.flagged = std::move(flagged);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("risk grid document: ") + e.what());
  }
  return grid;
}

std::string FormatGrid(const RiskGrid& grid) {
  std::string out = fmt::format("{:<8}", "FAR");
  for (const auto& uc : grid.use_cases) out += fmt::format(" {:>13}", uc);
  out += "\n";
  for (std::size_t f = 0; f < grid.far_settings.size(); ++f) {
    out += fmt::format("{:<8}", grid.far_settings[f].label);
    for (std::size_t u = 0; u < grid.use_cases.size(); ++u) {
      std::string mark = " ";
      if (grid.reference && grid.reference->first == f &&
          grid.reference->second == u) {
        mark = "R";
      } else if (!grid.flagged.empty() && grid.flagged[f][u]) {
        mark = "<";
      }
      out += fmt::format(" {:>12.4g}{}", grid.cells[f][u].c_identify, mark);
    }
    out += "\n";
  }
  if (grid.reference) {
    out += "R: reference cell, <: C_identify below the reference\n";
  }
  return out;
}

}  // namespace cjrisk
