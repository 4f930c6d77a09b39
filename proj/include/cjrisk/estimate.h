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

// Conditional logistic regression for paired choices.
//
// Each question is a stratum of two alternatives. Conditioning on one
// alternative being chosen, the stratum likelihood is
//
//   exp(x_c.b) / (exp(x_c.b) + exp(x_r.b)) = logistic((x_c - x_r).b),
//
// so the conditional likelihood is exactly a no-intercept binary logit on
// difference vectors. That reduction is what is implemented here; strata are
// pooled per plan pair, which gives the same likelihood as per-respondent
// strata.

#ifndef CJRISK_ESTIMATE_H_
#define CJRISK_ESTIMATE_H_

#include <cstddef>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "cjrisk/design.h"
#include "cjrisk/schema.h"
#include "cjrisk/simulate.h"
#include "json.hpp"

namespace cjrisk {

// Responses aggregated per plan pair: row k of `diffs` is x_card1 - x_card2
// and the counts say how often each side was chosen.
struct PairedChoiceData {
  Eigen::MatrixXd diffs;
  Eigen::VectorXd card1_wins;
  Eigen::VectorXd card2_wins;

  std::size_t attribute_count() const {
    return static_cast<std::size_t>(diffs.cols());
  }
  double record_count() const { return card1_wins.sum() + card2_wins.sum(); }
};

PairedChoiceData Aggregate(const std::vector<ChoiceRecord>& records,
                           const PairingPlan& plan,
                           const FractionalDesign& design,
                           const AttributeSchema& schema);

double LogLikelihood(const PairedChoiceData& data, const Eigen::VectorXd& beta);
Eigen::VectorXd Gradient(const PairedChoiceData& data,
                         const Eigen::VectorXd& beta);
// Negative semidefinite for every beta.
Eigen::MatrixXd Hessian(const PairedChoiceData& data,
                        const Eigen::VectorXd& beta);

// Conditional log-likelihood of `records` under `beta`.
double LogLikelihood(const TrueUtility& beta,
                     const std::vector<ChoiceRecord>& records,
                     const PairingPlan& plan, const FractionalDesign& design,
                     const AttributeSchema& schema);

// Upper-tail standard normal probability P(Z > z).
double NormalSf(double z);

struct CoefficientRow {
  std::string attribute;
  double coef = 0.0;
  double exp_coef = 1.0;  // odds ratio
  double se = 0.0;
  double z = 0.0;
  double p = 1.0;  // two-sided Wald

  bool operator==(const CoefficientRow&) const = default;
};

struct UtilityEstimate {
  std::vector<CoefficientRow> rows;  // schema order
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  std::size_t records = 0;

  Eigen::VectorXd Coefficients() const;
  TrueUtility AsUtility() const;
  bool operator==(const UtilityEstimate&) const = default;
};

struct FitOptions {
  double gradient_tolerance = 1e-8;  // max-norm
  int max_iterations = 100;
  int max_halvings = 30;
};

// Newton-Raphson with step halving. Standard errors come from the inverse of
// the negative Hessian at the optimum.
//
// Throws IdentifiabilityError when the observed difference vectors do not
// span the attribute space and SeparationError when the likelihood keeps
// increasing along a direction without bound.
UtilityEstimate Fit(const PairedChoiceData& data, const AttributeSchema& schema,
                    const FitOptions& options = {});
UtilityEstimate Fit(const std::vector<ChoiceRecord>& records,
                    const PairingPlan& plan, const FractionalDesign& design,
                    const AttributeSchema& schema,
                    const FitOptions& options = {});

// "**" for p < 0.05, "*" for p < 0.1.
std::string SignificanceMarker(double p);
// Fixed-width table with columns coef, exp(coef), se(coef), z, p.
std::string FormatEstimateTable(const UtilityEstimate& estimate);

nlohmann::json EstimateToJson(const UtilityEstimate& estimate);
UtilityEstimate EstimateFromJson(const nlohmann::json& doc);

}  // namespace cjrisk

#endif  // CJRISK_ESTIMATE_H_
