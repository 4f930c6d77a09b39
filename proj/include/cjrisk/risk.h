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

// Risk arithmetic for one-to-many identification deployments.
//
// A search over a gallery of N templates falsely accepts a non-enrolled
// attacker with probability
//
//   P_open  = 1 - (1 - P_FA)^N                       ~ N P_FA
//
// and an enrolled user who is falsely rejected against their own template but
// falsely matched to someone else with
//
//   P_close = P_FR (1 - (1 - P_FA)^(N-1))            ~ P_FR (N-1) P_FA.
//
// With alpha the probability that a transaction is an attack,
//
//   C_identify = C_open alpha FPIR_open + C_close (1 - alpha) FPIR_close.
//
// alpha comes from the deployment's deterrence levels weighted by estimated
// utility magnitudes: 1 with every measure at its weakest, 0 with every measure
// at its strongest.

#ifndef CJRISK_RISK_H_
#define CJRISK_RISK_H_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cjrisk/estimate.h"
#include "cjrisk/schema.h"
#include "json.hpp"

namespace cjrisk {

struct VerifierRates {
  double p_fa = 0.0;
  double p_fr = 0.0;
  std::size_t n = 1;  // gallery size

  void Validate() const;
  bool operator==(const VerifierRates&) const = default;
};

double POpen(const VerifierRates& rates);
double PClose(const VerifierRates& rates);

struct FpirPair {
  double open = 0.0;
  double close = 0.0;
};

// Linearized rates, each clamped to a probability:
//   open  = min(1, N P_FA)
//   close = P_FR min(1, (N-1) P_FA)
FpirPair FpirApprox(const VerifierRates& rates);

enum class FpirMode { kExact, kApproximate };
enum class AlphaKind { kCoefficientWeighted, kUnweighted };

std::string ToString(FpirMode mode);
std::string ToString(AlphaKind kind);
FpirMode ParseFpirMode(const std::string& s);
AlphaKind ParseAlphaKind(const std::string& s);

// Weights define which attributes are in the alpha scope.
struct AlphaModel {
  AlphaKind kind = AlphaKind::kCoefficientWeighted;
  std::map<std::string, double> weights;
  // Maps the normalized level l / (L - 1) in [0, 1] to a perceived deterrence
  // in [0, 1]. Identity when empty. Hook for nonlinear (e.g. sigmoid)
  // perception models.
  std::function<double(double)> perceived_value;

  // |coef| per attribute.
  static AlphaModel CoefficientWeighted(const UtilityEstimate& estimate);
  static AlphaModel CoefficientWeighted(
      const std::map<std::string, double>& coefficients);
  // Unit weight for every schema attribute.
  static AlphaModel Unweighted(const AttributeSchema& schema);
};

//   alpha = 1 - sum_a w_a l_a / sum_a w_a (L_a - 1)
//
// Throws ModelError when weights are negative, all zero, name unknown
// attributes, or a weighted attribute has no level in `levels`.
double Alpha(const LevelMap& levels, const AlphaModel& model,
             const AttributeSchema& schema);

struct RiskScenario {
  LevelMap levels;  // includes the FAR attribute when it is in alpha scope
  VerifierRates rates;
  double c_open = 0.5;
  double c_close = 0.5;

  bool operator==(const RiskScenario&) const = default;
};

struct RiskResult {
  double alpha = 0.0;
  double fpir_open = 0.0;
  double fpir_close = 0.0;
  double c_identify = 0.0;
  FpirMode mode = FpirMode::kApproximate;

  bool operator==(const RiskResult&) const = default;
};

// C_identify from a given alpha and FPIR terms.
double CombineRisk(double alpha, const FpirPair& fpir, double c_open,
                   double c_close);

RiskResult CIdentify(const RiskScenario& scenario, const AlphaModel& model,
                     const AttributeSchema& schema, FpirMode mode);

// Detection-cost baseline:
//   beta   = (C_FalseAlarm / C_Miss) (1 - P_Target) / P_Target
//   C_Norm = P_Miss + beta P_FalseAlarm
// Throws DomainError unless 0 < p_target < 1 and both costs are positive.
double CostRatioBeta(double c_miss, double c_false_alarm, double p_target);
double CNorm(double p_miss, double p_false_alarm, double c_miss,
             double c_false_alarm, double p_target);

// Numeric value of a FAR level label: "10^-4", "1e-4" or "0.0001".
std::optional<double> ParseRate(const std::string& label);

struct FarSetting {
  std::size_t level = 0;
  std::string label;
  double p_fa = 0.0;

  bool operator==(const FarSetting&) const = default;
};

// One setting per level of `far_attribute`, values parsed from the labels.
std::vector<FarSetting> FarSettings(const AttributeSchema& schema,
                                    const std::string& far_attribute = "FAR");

struct UseCase {
  std::string name;
  LevelMap levels;  // everything except the FAR attribute

  bool operator==(const UseCase&) const = default;
};

struct GridReference {
  std::string use_case;
  std::string far_label;
};

struct GridRequest {
  std::vector<UseCase> use_cases;
  std::vector<FarSetting> far_settings;
  std::string far_attribute = "FAR";
  double p_fr = 1e-2;
  std::size_t n = 10000;
  double c_open = 0.5;
  double c_close = 0.5;
  FpirMode mode = FpirMode::kApproximate;
  std::optional<GridReference> reference;
};

struct RiskGrid {
  std::vector<std::string> use_cases;
  std::vector<FarSetting> far_settings;
  // cells[f][u]: FAR setting f, use case u.
  std::vector<std::vector<RiskResult>> cells;
  // Set when a reference was requested. flagged[f][u] marks cells with
  // C_identify strictly below the reference cell.
  std::optional<std::pair<std::size_t, std::size_t>> reference;
  std::vector<std::vector<bool>> flagged;

  const RiskResult& At(const std::string& use_case,
                       const std::string& far_label) const;
  bool FlaggedAt(const std::string& use_case,
                 const std::string& far_label) const;
  bool operator==(const RiskGrid&) const = default;
};

RiskGrid CompareUseCases(const GridRequest& request, const AlphaModel& model,
                         const AttributeSchema& schema);

// Rows = FAR settings, columns = use cases, cells = C_identify.
std::string GridToCsv(const RiskGrid& grid);
nlohmann::json GridToJson(const RiskGrid& grid);
RiskGrid GridFromJson(const nlohmann::json& doc);
std::string FormatGrid(const RiskGrid& grid);

nlohmann::json ResultToJson(const RiskResult& result);

}  // namespace cjrisk

#endif  // CJRISK_RISK_H_
