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

#include "cjrisk/estimate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "Eigen/Cholesky"
#include "Eigen/LU"
#include "cjrisk/error.h"
#include "fmt/format.h"
#include "json.hpp"

namespace cjrisk {
namespace {

// Beyond this many log-odds per level step a coefficient is treated as
// diverging and the data are checked for separation.
constexpr double kDivergenceBound = 15.0;

// log(logistic(t)) without overflow.
double LogLogistic(double t) {
  return t >= 0 ? -std::log1p(std::exp(-t)) : t - std::log1p(std::exp(t));
}

// Neumaier summation over terms merged by value, so the total does not depend
// on the order in which pairs were aggregated and repeated identical terms
// collapse into one exact product.
double SumTerms(std::vector<std::pair<double, double>> value_count) {
  std::sort(value_count.begin(), value_count.end());
  double sum = 0.0, comp = 0.0;
  std::size_t i = 0;
  while (i < value_count.size()) {
    double value = value_count[i].first;
    double count = 0.0;
    for (; i < value_count.size() && value_count[i].first == value; ++i) {
      count += value_count[i].second;
    }
    const double term = value * count;
    const double t = sum + term;
    comp += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term
                                              : (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

std::vector<Eigen::Index> ActiveRows(const PairedChoiceData& data) {
  std::vector<Eigen::Index> rows;
  for (Eigen::Index k = 0; k < data.diffs.rows(); ++k) {
    if (data.card1_wins[k] + data.card2_wins[k] > 0) rows.push_back(k);
  }
  return rows;
}

void CheckIdentifiable(const PairedChoiceData& data,
                       const AttributeSchema& schema) {
  const auto rows = ActiveRows(data);
  const Eigen::Index k = data.diffs.cols();
  Eigen::MatrixXd active(static_cast<Eigen::Index>(rows.size()), k);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    active.row(static_cast<Eigen::Index>(i)) = data.diffs.row(rows[i]);
  }
  if (rows.empty()) {
    throw IdentifiabilityError("no responses to estimate from");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(active);
  if (lu.rank() == k) return;

  const Eigen::MatrixXd kernel = lu.kernel();
  std::string names;
  for (Eigen::Index a = 0; a < k; ++a) {
    if (kernel.row(a).cwiseAbs().maxCoeff() > 1e-9) {
      if (!names.empty()) names += ", ";
      names += schema[static_cast<std::size_t>(a)].name;
    }
  }
  throw IdentifiabilityError(
      "pair differences are rank deficient; collinear attributes: " + names);
}

// True when moving along `dir` never lowers any observed choice's utility
// margin, i.e. the likelihood is unbounded in that direction.
bool IsRecessionDirection(const PairedChoiceData& data,
                          const Eigen::VectorXd& dir) {
  for (Eigen::Index k = 0; k < data.diffs.rows(); ++k) {
    const double s = data.diffs.row(k).dot(dir);
    if (data.card1_wins[k] > 0 && s < -1e-9) return false;
    if (data.card2_wins[k] > 0 && s > 1e-9) return false;
  }
  return true;
}

void CheckSeparation(const PairedChoiceData& data, const Eigen::VectorXd& beta,
                     const AttributeSchema& schema) {
  if (beta.cwiseAbs().maxCoeff() <= kDivergenceBound) return;
  // Complete separation diverges along beta itself; quasi-complete
  // separation only along the coordinates that ran away.
  Eigen::VectorXd runaway = Eigen::VectorXd::Zero(beta.size());
  for (Eigen::Index a = 0; a < beta.size(); ++a) {
    if (std::fabs(beta[a]) > kDivergenceBound) runaway[a] = beta[a];
  }
  if (!IsRecessionDirection(data, beta / beta.norm()) &&
      !IsRecessionDirection(data, runaway / runaway.norm())) {
    return;
  }
  Eigen::Index worst;
  beta.cwiseAbs().maxCoeff(&worst);
  throw SeparationError("choices are perfectly separated; coefficient for '" +
                        schema[static_cast<std::size_t>(worst)].name +
                        "' diverges");
}

}  // namespace

PairedChoiceData Aggregate(const std::vector<ChoiceRecord>& records,
                           const PairingPlan& plan,
                           const FractionalDesign& design,
                           const AttributeSchema& schema) {
  ValidatePlan(plan, design);
  const auto n = static_cast<Eigen::Index>(plan.size());
  PairedChoiceData data;
  data.diffs.resize(n, static_cast<Eigen::Index>(schema.size()));
  data.card1_wins = Eigen::VectorXd::Zero(n);
  data.card2_wins = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto [c1, c2] = plan.pairs[static_cast<std::size_t>(k)];
    data.diffs.row(k) = (Encode(design.cards[c1], schema, false) -
                         Encode(design.cards[c2], schema, false))
                            .transpose();
  }
  for (const ChoiceRecord& r : records) {
    if (r.pair >= plan.size()) {
      throw IntegrityError("response for pair " + std::to_string(r.pair + 1) +
                           " but plan has " + std::to_string(plan.size()) +
                           " pairs");
    }
    const auto k = static_cast<Eigen::Index>(r.pair);
    if (r.chosen == Choice::kCard1) {
      data.card1_wins[k] += 1;
    } else {
      data.card2_wins[k] += 1;
    }
  }
  return data;
}

double LogLikelihood(const PairedChoiceData& data,
                     const Eigen::VectorXd& beta) {
  if (beta.size() != data.diffs.cols()) {
    throw ValidationError("coefficient vector length does not match data");
  }
  std::vector<std::pair<double, double>> terms;
  terms.reserve(2 * static_cast<std::size_t>(data.diffs.rows()));
  for (Eigen::Index k = 0; k < data.diffs.rows(); ++k) {
    const double t = data.diffs.row(k).dot(beta);
    if (data.card1_wins[k] > 0) {
      terms.emplace_back(LogLogistic(t), data.card1_wins[k]);
    }
    if (data.card2_wins[k] > 0) {
      terms.emplace_back(LogLogistic(-t), data.card2_wins[k]);
    }
  }
  return SumTerms(std::move(terms));
}

Eigen::VectorXd Gradient(const PairedChoiceData& data,
                         const Eigen::VectorXd& beta) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(data.diffs.cols());
  for (Eigen::Index k = 0; k < data.diffs.rows(); ++k) {
    const double p = Logistic(data.diffs.row(k).dot(beta));
    const double w =
        data.card1_wins[k] * (1.0 - p) - data.card2_wins[k] * p;
    g += w * data.diffs.row(k).transpose();
  }
  return g;
}

Eigen::MatrixXd Hessian(const PairedChoiceData& data,
                        const Eigen::VectorXd& beta) {
  const Eigen::Index k = data.diffs.cols();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index r = 0; r < data.diffs.rows(); ++r) {
    const double p = Logistic(data.diffs.row(r).dot(beta));
    const double w = (data.card1_wins[r] + data.card2_wins[r]) * p * (1.0 - p);
    const Eigen::VectorXd d = data.diffs.row(r).transpose();
    h.noalias() -= w * d * d.transpose();
  }
  return h;
}

double LogLikelihood(const TrueUtility& beta,
                     const std::vector<ChoiceRecord>& records,
                     const PairingPlan& plan, const FractionalDesign& design,
                     const AttributeSchema& schema) {
  return LogLikelihood(Aggregate(records, plan, design, schema),
                       beta.Vector(schema));
}

double NormalSf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

Eigen::VectorXd UtilityEstimate::Coefficients() const {
  Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    b[static_cast<Eigen::Index>(i)] = rows[i].coef;
  }
  return b;
}

TrueUtility UtilityEstimate::AsUtility() const {
  TrueUtility u;
  for (const auto& r : rows) u.beta[r.attribute] = r.coef;
  return u;
}

UtilityEstimate Fit(const PairedChoiceData& data, const AttributeSchema& schema,
                    const FitOptions& options) {
  if (data.attribute_count() != schema.size()) {
    throw ValidationError("data and schema disagree on attribute count");
  }
  CheckIdentifiable(data, schema);

  const Eigen::Index k = data.diffs.cols();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
  double ll = LogLikelihood(data, beta);
  UtilityEstimate est;

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    const Eigen::VectorXd g = Gradient(data, beta);
    if (g.cwiseAbs().maxCoeff() < options.gradient_tolerance) {
      est.converged = true;
      break;
    }
    if (beta.cwiseAbs().maxCoeff() > 4 * kDivergenceBound) break;
    const Eigen::MatrixXd info = -Hessian(data, beta);
    const Eigen::VectorXd step = info.ldlt().solve(g);

    const double noise =
        64 * std::numeric_limits<double>::epsilon() * (std::fabs(ll) + 1);
    double scale = 1.0;
    bool improved = false;
    for (int h = 0; h <= options.max_halvings; ++h, scale *= 0.5) {
      const Eigen::VectorXd trial = beta + scale * step;
      const double trial_ll = LogLikelihood(data, trial);
      // Near the optimum the ascent falls below double resolution of the
      // summed likelihood; there a shrinking gradient decides instead.
      const bool within_noise = trial_ll >= ll - noise;
      if (trial_ll > ll ||
          (within_noise && Gradient(data, trial).cwiseAbs().maxCoeff() <
                               g.cwiseAbs().maxCoeff())) {
        beta = trial;
        ll = trial_ll;
        improved = true;
        break;
      }
    }
    if (!improved) {
      // No representable ascent left; accept if the gradient is already
      // negligible relative to the data size.
      est.converged = g.cwiseAbs().maxCoeff() < options.gradient_tolerance;
      break;
    }
  }
  if (!est.converged && iter == options.max_iterations) {
    est.converged = Gradient(data, beta).cwiseAbs().maxCoeff() <
                    options.gradient_tolerance;
  }
  CheckSeparation(data, beta, schema);

  const Eigen::MatrixXd cov = (-Hessian(data, beta)).inverse();
  est.log_likelihood = ll;
  est.iterations = iter;
  est.records = static_cast<std::size_t>(data.record_count());
  for (Eigen::Index a = 0; a < k; ++a) {
    CoefficientRow row;
    row.attribute = schema[static_cast<std::size_t>(a)].name;
    row.coef = beta[a];
    row.exp_coef = std::exp(beta[a]);
    row.se = std::sqrt(std::max(0.0, cov(a, a)));
    row.z = row.se > 0 ? row.coef / row.se : 0.0;
    row.p = row.se > 0 ? std::min(1.0, 2.0 * NormalSf(std::fabs(row.z))) : 1.0;
    est.rows.push_back(row);
  }
  return est;
}

UtilityEstimate Fit(const std::vector<ChoiceRecord>& records,
                    const PairingPlan& plan, const FractionalDesign& design,
                    const AttributeSchema& schema, const FitOptions& options) {
  return Fit(Aggregate(records, plan, design, schema), schema, options);
}

std::string SignificanceMarker(double p) {
  if (p < 0.05) return "**";
  if (p < 0.1) return "*";
  return "";
}

std::string FormatEstimateTable(const UtilityEstimate& estimate) {
  std::size_t name_width = 10;
  for (const auto& r : estimate.rows) {
    name_width = std::max(name_width, r.attribute.size());
  }
  std::string out = fmt::format("{:<{}} {:>10} {:>10} {:>10} {:>10} {:>12}\n",
                                "", name_width, "coef", "exp(coef)",
                                "se(coef)", "z", "p");
  for (const auto& r : estimate.rows) {
    std::string p = r.p < std::numeric_limits<double>::epsilon() ? std::string("<2e-16")
                                : fmt::format("{:.3g}", r.p);
    p += SignificanceMarker(r.p);
    out += fmt::format("{:<{}} {:>10.3f} {:>10.3f} {:>10.3f} {:>10.3f} {:>12}\n",
                       r.attribute, name_width, r.coef, r.exp_coef, r.se, r.z,
                       p);
  }
  out += fmt::format(
      "log-likelihood = {:.6f}, records = {}, iterations = {}, converged = "
      "{}\n",
      estimate.log_likelihood, estimate.records, estimate.iterations,
      estimate.converged ? "yes" : "no");
  out += "(*: p<0.1, **: p<0.05)\n";
  return out;
}

nlohmann::json EstimateToJson(const UtilityEstimate& estimate) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : estimate.rows) {
    rows.push_back({{"attribute", r.attribute},
                    {"coef", r.coef},
                    {"exp_coef", r.exp_coef},
                    {"se", r.se},
                    {"z", r.z},
                    {"p", r.p}});
  }
  return {{"coefficients", rows},
          {"log_likelihood", estimate.log_likelihood},
          {"iterations", estimate.iterations},
          {"converged", estimate.converged},
          {"records", estimate.records}};
}

UtilityEstimate EstimateFromJson(const nlohmann::json& doc) {
  UtilityEstimate est;
  try {
    for (const auto& r : doc.at("coefficients")) {
      CoefficientRow row;
      row.attribute = r.at("attribute").get<std::string>();
      row.coef = r.at("coef").get<double>();
      row.exp_coef = r.at("exp_coef").get<double>();
      row.se = r.at("se").get<double>();
      row.z = r.at("z").get<double>();
      row.p = r.at("p").get<double>();
      est.rows.push_back(std::move(row));
    }
    est.log_likelihood = doc.at("log_likelihood").get<double>();
    est.iterations = doc.at("iterations").get<int>();
    est.converged = doc.at("converged").get<bool>();
    est.records = doc.at("records").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("estimate document: ") + e.what());
  }
  return est;
}

}  // namespace cjrisk
