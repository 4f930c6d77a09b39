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

#include "cjrisk/simulate.h"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "cjrisk/error.h"
#include "cjrisk/rng.h"

namespace cjrisk {

Eigen::VectorXd TrueUtility::Vector(const AttributeSchema& schema) const {
  if (beta.size() != schema.size()) {
    throw ValidationError("utility covers " + std::to_string(beta.size()) +
                          " attributes, schema has " +
                          std::to_string(schema.size()));
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(schema.size()));
  for (std::size_t a = 0; a < schema.size(); ++a) {
    auto it = beta.find(schema[a].name);
    if (it == beta.end()) {
      throw ValidationError("utility missing attribute '" + schema[a].name +
                            "'");
    }
    out[static_cast<Eigen::Index>(a)] = it->second;
  }
  return out;
}

TrueUtility TrueUtility::FromVector(const Eigen::VectorXd& beta,
                                    const AttributeSchema& schema) {
  if (beta.size() != static_cast<Eigen::Index>(schema.size())) {
    throw ValidationError("utility vector length does not match schema");
  }
  TrueUtility u;
  for (std::size_t a = 0; a < schema.size(); ++a) {
    u.beta[schema[a].name] = beta[static_cast<Eigen::Index>(a)];
  }
  return u;
}

double Logistic(double t) {
  // q >= 0.5, so 1 - q is exact and the two branches sum to exactly 1.
  const double q = 1.0 / (1.0 + std::exp(-std::fabs(t)));
  return t >= 0 ? q : 1.0 - q;
}

double ChoiceProbability(const ModelRow& card1, const ModelRow& card2,
                         const Eigen::VectorXd& beta) {
  if (card1.size() != beta.size() || card2.size() != beta.size()) {
    throw ValidationError("card rows and utility vector differ in length");
  }
  return Logistic((card1 - card2).dot(beta));
}

std::string RespondentId(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "sim-%05zu", index + 1);
  return buf;
}

std::vector<ChoiceRecord> SimulateResponses(const PairingPlan& plan,
                                            const FractionalDesign& design,
                                            const AttributeSchema& schema,
                                            const TrueUtility& beta,
                                            const SimulationOptions& options) {
  ValidatePlan(plan, design);
  const Eigen::VectorXd b = beta.Vector(schema);

  std::vector<double> prob(plan.size());
  for (std::size_t k = 0; k < plan.size(); ++k) {
    const auto [c1, c2] = plan.pairs[k];
    prob[k] = ChoiceProbability(Encode(design.cards[c1], schema, false),
                                Encode(design.cards[c2], schema, false), b);
  }

  std::vector<ChoiceRecord> records;
  records.reserve(options.respondents * plan.size());
  std::vector<std::size_t> order(plan.size());
  for (std::size_t r = 0; r < options.respondents; ++r) {
    Rng rng = Rng::Stream(options.seed, r);
    std::iota(order.begin(), order.end(), 0);
    if (options.shuffle_pairs) {
      for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.Below(i)]);
      }
    }
    const std::string id = RespondentId(r);
    for (std::size_t k : order) {
      const Choice c =
          rng.Uniform() < prob[k] ? Choice::kCard1 : Choice::kCard2;
      records.push_back({id, k, c});
    }
  }
  return records;
}

}  // namespace cjrisk
