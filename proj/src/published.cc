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

#include "cjrisk/published.h"

namespace cjrisk::published {

FractionalDesign Design() {
  const AttributeSchema schema = DefaultSchema();
  // FAR, Camera, Staff, Friendship, Congestion
  const std::vector<std::vector<std::string>> rows = {
      {"10^-2", "Yes", "Yes", "Yes", "empty"},
      {"10^-2", "No", "No", "No", "normal"},
      {"10^-3", "Yes", "No", "Yes", "crowded"},
      {"10^-3", "Yes", "Yes", "Yes", "normal"},
      {"10^-3", "No", "Yes", "No", "empty"},
      {"10^-4", "Yes", "No", "No", "empty"},
      {"10^-4", "No", "Yes", "Yes", "normal"},
      {"10^-5", "No", "No", "Yes", "empty"},
      {"10^-5", "Yes", "Yes", "No", "crowded"},
  };
  FractionalDesign design;
  int number = 1;
  for (const auto& row : rows) {
    std::map<std::string, std::string> labels;
    for (std::size_t a = 0; a < schema.size(); ++a) {
      labels[schema[a].name] = row[a];
    }
    design.cards.push_back(MakeCardFromLabels(schema, labels, number++));
  }
  design.criterion_value = DesignCriterion(design.cards, schema);
  return design;
}

PairingPlan Plan() {
  const std::vector<std::pair<int, int>> numbers = {
      {1, 5}, {9, 7}, {8, 1}, {5, 4}, {6, 2}, {7, 8}, {4, 3}, {3, 6}, {2, 9}};
  PairingPlan plan;
  for (auto [a, b] : numbers) {
    plan.pairs.emplace_back(static_cast<std::size_t>(a - 1),
                            static_cast<std::size_t>(b - 1));
  }
  return plan;
}

UtilityEstimate Estimate() {
  UtilityEstimate est;
  est.rows = {
      {"FAR", -0.460, 0.632, 0.022, -21.074, 2e-16},
      {"Camera", -0.336, 0.715, 0.041, -8.119, 2e-16},
      {"Staff", -0.093, 0.911, 0.052, -1.79, 0.073},
      {"Friendship", -0.056, 0.946, 0.052, -1.085, 0.278},
      {"Congestion", -0.169, 0.845, 0.028, -5.978, 2e-16},
  };
  est.converged = true;
  est.records = 5400;
  return est;
}

TrueUtility Utility() { return Estimate().AsUtility(); }

std::vector<UseCase> UseCases() {
  return {
      {"Low-secure",
       {{"Camera", 0}, {"Staff", 0}, {"Friendship", 0}, {"Congestion", 0}}},
      {"Mid-secure",
       {{"Camera", 0}, {"Staff", 1}, {"Friendship", 1}, {"Congestion", 1}}},
      {"High-secure",
       {{"Camera", 1}, {"Staff", 1}, {"Friendship", 1}, {"Congestion", 2}}},
  };
}

std::vector<GridCell> PrintedGrid() {
  return {
      {"Low-secure", "10^-2", 0.5, false},
      {"Mid-secure", "10^-2", 0.390, false},
      {"High-secure", "10^-2", 0.315, false},
      {"Low-secure", "10^-3", 0.406, false},
      {"Mid-secure", "10^-3", 0.296, false},
      {"High-secure", "10^-3", 0.211, true},
      {"Low-secure", "10^-4", 0.293, false},
      {"Mid-secure", "10^-4", 0.127, true},
      {"High-secure", "10^-4", 0.108, true},
      {"Low-secure", "10^-5", 0.019, true},
      {"Mid-secure", "10^-5", 0.010, true},
      {"High-secure", "10^-5", 4.99e-4, true},
  };
}

}  // namespace cjrisk::published
