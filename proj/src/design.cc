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

#include "cjrisk/design.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "Eigen/LU"
#include "cjrisk/error.h"
#include "cjrisk/rng.h"

namespace cjrisk {
namespace {

// Swaps must raise det(M) by at least this relative amount. Guards against
// cycling on round-off.
constexpr double kMinImprovement = 1e-10;

struct RestartResult {
  std::vector<std::size_t> rows;  // candidate indices
  double criterion = 0.0;
  bool ok = false;
};

bool FullRank(const Eigen::MatrixXd& m) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  return lu.rank() == m.cols();
}

Eigen::MatrixXd Information(const Eigen::MatrixXd& x,
                            const std::vector<std::size_t>& rows) {
  const Eigen::Index p = x.cols();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t r : rows) {
    auto v = x.row(static_cast<Eigen::Index>(r)).transpose();
    m.noalias() += v * v.transpose();
  }
  return m;
}

// Random n-subset of [0, count) by partial Fisher-Yates.
std::vector<std::size_t> RandomSubset(Rng& rng, std::size_t count,
                                      std::size_t n) {
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.Below(count - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  return idx;
}

RestartResult RunRestart(const Eigen::MatrixXd& x,
                         const FederovOptions& options, std::size_t restart,
                         FederovTrace* trace) {
  const auto count = static_cast<std::size_t>(x.rows());
  Rng rng = Rng::Stream(options.seed, restart);

  RestartResult result;
  for (std::size_t attempt = 0; attempt < options.start_attempts; ++attempt) {
    auto rows = RandomSubset(rng, count, options.n);
    if (FullRank(Information(x, rows))) {
      result.rows = std::move(rows);
      result.ok = true;
      break;
    }
  }
  if (!result.ok) return result;

  std::vector<char> in_design(count, 0);
  for (std::size_t r : result.rows) in_design[r] = 1;

  Eigen::MatrixXd m = Information(x, result.rows);
  double det = m.determinant();
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    const Eigen::MatrixXd m_inv = m.inverse();
    // v.row(j) = x_j' M^-1, so d(x_i, x_j) = v.row(i) . x.row(j).
    const Eigen::MatrixXd v = x * m_inv;
    const Eigen::VectorXd d = (v.array() * x.array()).rowwise().sum();

    double best = kMinImprovement;
    std::size_t best_pos = 0, best_cand = 0;
    bool found = false;
    for (std::size_t pos = 0; pos < result.rows.size(); ++pos) {
      const auto out = static_cast<Eigen::Index>(result.rows[pos]);
      for (std::size_t cand = 0; cand < count; ++cand) {
        if (in_design[cand]) continue;
        const auto in = static_cast<Eigen::Index>(cand);
        const double d_cross = v.row(out).dot(x.row(in));
        const double delta =
            d[in] - (d[out] * d[in] - d_cross * d_cross) - d[out];
        if (delta > best) {
          best = delta;
          best_pos = pos;
          best_cand = cand;
          found = true;
        }
      }
    }
    if (!found) break;

    in_design[result.rows[best_pos]] = 0;
    in_design[best_cand] = 1;
    result.rows[best_pos] = best_cand;
    m = Information(x, result.rows);
    const double new_det = m.determinant();
    if (trace != nullptr) {
      trace->steps.push_back(
          {restart, best_pos, best_cand, 1.0 + best, det, new_det});
    }
    det = new_det;
  }
  result.criterion = det;
  return result;
}

}  // namespace

CandidateSet FullFactorial(const AttributeSchema& schema) {
  CandidateSet set;
  set.cards.reserve(schema.CombinationCount());
  std::vector<std::size_t> levels(schema.size(), 0);
  while (true) {
    set.cards.push_back({levels, std::nullopt});
    // Odometer increment, last attribute fastest.
    std::size_t a = schema.size();
    while (a > 0) {
      --a;
      if (++levels[a] < schema[a].level_count()) break;
      levels[a] = 0;
      if (a == 0) return set;
    }
  }
}

double DesignCriterion(const std::vector<ConjointCard>& cards,
                       const AttributeSchema& schema) {
  Eigen::MatrixXd x = ModelMatrix(cards, schema, true);
  return (x.transpose() * x).determinant();
}

FractionalDesign FederovSelect(const CandidateSet& candidates,
                               const AttributeSchema& schema,
                               const FederovOptions& options,
                               FederovTrace* trace) {
  const std::size_t columns = schema.size() + 1;
  if (options.n < columns) {
    throw ConfigurationError("design size " + std::to_string(options.n) +
                             " is below the " + std::to_string(columns) +
                             " model columns");
  }
  if (options.n > candidates.cards.size()) {
    throw ConfigurationError("design size " + std::to_string(options.n) +
                             " exceeds the " +
                             std::to_string(candidates.cards.size()) +
                             " candidates");
  }
  if (options.restarts == 0) {
    throw ConfigurationError("at least one restart is required");
  }
  const Eigen::MatrixXd x = ModelMatrix(candidates.cards, schema, true);

  RestartResult best;
  for (std::size_t r = 0; r < options.restarts; ++r) {
    RestartResult res = RunRestart(x, options, r, trace);
    if (trace != nullptr) trace->restart_criteria.push_back(res.criterion);
    if (res.ok && (!best.ok || res.criterion > best.criterion)) {
      best = std::move(res);
    }
  }
  if (!best.ok) {
    throw DegenerateCandidateError(
        "no restart found a nonsingular starting design");
  }

  std::sort(best.rows.begin(), best.rows.end());
  FractionalDesign design;
  design.seed = options.seed;
  design.criterion_value = best.criterion;
  int number = 1;
  for (std::size_t r : best.rows) {
    ConjointCard card = candidates.cards[r];
    card.index = number++;
    design.cards.push_back(std::move(card));
  }
  return design;
}

PairingPlan MakePairs(const FractionalDesign& design, std::uint64_t seed,
                      std::size_t max_retries) {
  const std::size_t n = design.cards.size();
  if (n < 2) throw ValidationError("pairing needs at least two cards");

  Rng rng(seed);
  std::vector<double> keys_a(n), keys_b(n);
  std::vector<std::size_t> order_a(n), order_b(n);
  auto sort_by = [](std::vector<std::size_t>& order,
                    const std::vector<double>& keys) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) {
                       return keys[i] < keys[j];
                     });
  };

  for (std::size_t attempt = 0; attempt < max_retries; ++attempt) {
    for (auto& k : keys_a) k = rng.Uniform();
    for (auto& k : keys_b) k = rng.Uniform();
    sort_by(order_a, keys_a);
    sort_by(order_b, keys_b);

    bool clash = false;
    for (std::size_t r = 0; r < n && !clash; ++r) {
      clash = design.cards[order_a[r]].SameProfile(design.cards[order_b[r]]);
    }
    if (clash) continue;

    PairingPlan plan;
    plan.seed = seed;
    plan.pairs.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
      plan.pairs.emplace_back(order_a[r], order_b[r]);
    }
    return plan;
  }
  throw ImpossiblePairingError("no pairing without identical cards after " +
                               std::to_string(max_retries) + " attempts");
}

void ValidatePlan(const PairingPlan& plan, const FractionalDesign& design) {
  for (std::size_t i = 0; i < plan.pairs.size(); ++i) {
    const auto [a, b] = plan.pairs[i];
    if (a >= design.cards.size() || b >= design.cards.size()) {
      throw IntegrityError("pair " + std::to_string(i + 1) +
                           " references a card outside the design");
    }
    if (a == b) {
      throw IntegrityError("pair " + std::to_string(i + 1) +
                           " pairs a card with itself");
    }
  }
}

}  // namespace cjrisk
