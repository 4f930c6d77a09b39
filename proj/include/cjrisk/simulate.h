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

#ifndef CJRISK_SIMULATE_H_
#define CJRISK_SIMULATE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "cjrisk/design.h"
#include "cjrisk/schema.h"

namespace cjrisk {

// Utility per level step, keyed by attribute name.
struct TrueUtility {
  std::map<std::string, double> beta;

  // Coefficients in schema order. Throws ValidationError unless every schema
  // attribute is covered exactly once.
  Eigen::VectorXd Vector(const AttributeSchema& schema) const;
  static TrueUtility FromVector(const Eigen::VectorXd& beta,
                                const AttributeSchema& schema);
};

enum class Choice { kCard1 = 1, kCard2 = 2 };

inline Choice Flip(Choice c) {
  return c == Choice::kCard1 ? Choice::kCard2 : Choice::kCard1;
}

struct ChoiceRecord {
  std::string respondent;
  std::size_t pair = 0;  // 0-based row of the pairing plan
  Choice chosen = Choice::kCard1;

  bool operator==(const ChoiceRecord&) const = default;
};

// Numerically stable logistic. Logistic(t) + Logistic(-t) == 1 exactly.
double Logistic(double t);

// P(card1 chosen) = exp(x1.b) / (exp(x1.b) + exp(x2.b)). Rows must be coded
// without intercept.
double ChoiceProbability(const ModelRow& card1, const ModelRow& card2,
                         const Eigen::VectorXd& beta);

struct SimulationOptions {
  std::size_t respondents = 600;
  std::uint64_t seed = 0;
  // Present pairs in a per-respondent random order instead of plan order.
  bool shuffle_pairs = false;
};

// respondents x |pairs| independent draws. Respondent r uses its own RNG
// stream, so output is independent of generation order.
std::vector<ChoiceRecord> SimulateResponses(const PairingPlan& plan,
                                            const FractionalDesign& design,
                                            const AttributeSchema& schema,
                                            const TrueUtility& beta,
                                            const SimulationOptions& options);

std::string RespondentId(std::size_t index);

}  // namespace cjrisk

#endif  // CJRISK_SIMULATE_H_
