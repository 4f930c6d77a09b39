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

#include <cmath>
#include <random>

#include "cjrisk/error.h"
#include "cjrisk/published.h"
#include "cjrisk/simulate.h"
#include "doctest.h"

namespace cjrisk {
namespace {

TEST_CASE("logistic is symmetric and saturates without overflow") {
  CHECK(Logistic(0) == 0.5);
  CHECK(Logistic(800) == 1.0);
  CHECK(Logistic(-800) >= 0.0);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-40, 40);
  for (int i = 0; i < 1000; ++i) {
    const double t = u(gen);
    CHECK(Logistic(t) + Logistic(-t) == 1.0);
  }
}

TEST_CASE("choice probability examples") {
  const AttributeSchema s = DefaultSchema();
  const auto design = published::Design();
  const Eigen::VectorXd beta = published::Utility().Vector(s);
  const ModelRow x1 = Encode(design.cards[0], s, false);
  const ModelRow x5 = Encode(design.cards[4], s, false);
  CHECK((x1 - x5).transpose() == Eigen::RowVectorXd::Map(
                                     std::vector<double>{-1, 1, 0, 1, 0}.data(),
                                     5));
  const double dot = (x1 - x5).dot(beta);
  CHECK(dot == doctest::Approx(0.068).epsilon(1e-12));
  CHECK(ChoiceProbability(x1, x5, beta) ==
        doctest::Approx(1.0 / (1.0 + std::exp(-0.068))).epsilon(1e-14));
  CHECK(ChoiceProbability(x1, x5, beta) == doctest::Approx(0.517).epsilon(1e-3));

  CHECK(ChoiceProbability(x1, x5, Eigen::VectorXd::Zero(5)) == 0.5);
  CHECK(ChoiceProbability(x1, x1, beta) == 0.5);
  CHECK_THROWS_AS(ChoiceProbability(x1, x5, Eigen::VectorXd::Zero(4)),
                  ValidationError);
}

TEST_CASE("choice probability complement and shift invariance") {
  std::mt19937_64 gen(9);
  std::normal_distribution<double> n(0, 2);
  for (int i = 0; i < 500; ++i) {
    Eigen::VectorXd a(4), b(4), beta(4);
    for (int k = 0; k < 4; ++k) {
      a[k] = n(gen);
      b[k] = n(gen);
      beta[k] = n(gen);
    }
    CHECK(ChoiceProbability(a, b, beta) + ChoiceProbability(b, a, beta) ==
          1.0);
    // An intercept-like column common to both cards.
    Eigen::VectorXd a1(5), b1(5), beta1(5);
    a1 << 1, a;
    b1 << 1, b;
    beta1 << n(gen), beta;
    CHECK(ChoiceProbability(a1, b1, beta1) ==
          doctest::Approx(ChoiceProbability(a, b, beta)).epsilon(1e-12));
  }
}

TEST_CASE("simulated responses have the expected shape and are seeded") {
  const AttributeSchema s = DefaultSchema();
  SimulationOptions opt;
  opt.seed = 42;
  const auto records = SimulateResponses(published::Plan(), published::Design(),
                                         s, published::Utility(), opt);
  CHECK(records.size() == 5400);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].pair == i % 9);
    CHECK(records[i].respondent == RespondentId(i / 9));
  }
  CHECK(SimulateResponses(published::Plan(), published::Design(), s,
                          published::Utility(), opt) == records);
  opt.seed = 43;
  CHECK(SimulateResponses(published::Plan(), published::Design(), s,
                          published::Utility(), opt) != records);
}

TEST_CASE("shuffled pair order keeps one answer per pair") {
  const AttributeSchema s = DefaultSchema();
  SimulationOptions opt;
  opt.seed = 1;
  opt.respondents = 20;
  opt.shuffle_pairs = true;
  const auto records = SimulateResponses(published::Plan(), published::Design(),
                                         s, published::Utility(), opt);
  CHECK(records.size() == 180);
  bool any_reordered = false;
  for (std::size_t r = 0; r < 20; ++r) {
    std::vector<std::size_t> pairs;
    for (std::size_t k = 0; k < 9; ++k) pairs.push_back(records[r * 9 + k].pair);
    if (!std::is_sorted(pairs.begin(), pairs.end())) any_reordered = true;
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t k = 0; k < 9; ++k) CHECK(pairs[k] == k);
  }
  CHECK(any_reordered);
}

TEST_CASE("saturated utility always picks the favored card") {
  const AttributeSchema s = DefaultSchema();
  const auto design = published::Design();
  const auto plan = published::Plan();
  for (double big : {50.0, -50.0}) {
    TrueUtility beta;
    for (const auto& name : s.Names()) beta.beta[name] = 0.0;
    beta.beta["Camera"] = big;
    SimulationOptions opt;
    opt.seed = 3;
    opt.respondents = 100;
    for (const auto& r : SimulateResponses(plan, design, s, beta, opt)) {
      const auto [c1, c2] = plan.pairs[r.pair];
      const double d = (static_cast<double>(design.cards[c1].levels[1]) -
                        static_cast<double>(design.cards[c2].levels[1])) *
                       big;
      if (d > 0) CHECK(r.chosen == Choice::kCard1);
      if (d < 0) CHECK(r.chosen == Choice::kCard2);
    }
  }
}

TEST_CASE("indifferent respondents split evenly") {
  const AttributeSchema s = DefaultSchema();
  TrueUtility zero;
  for (const auto& name : s.Names()) zero.beta[name] = 0.0;
  PairingPlan one;
  one.pairs = {{0, 4}};
  SimulationOptions opt;
  opt.seed = 77;
  opt.respondents = 100000;
  const auto records =
      SimulateResponses(one, published::Design(), s, zero, opt);
  double card1 = 0;
  for (const auto& r : records) card1 += r.chosen == Choice::kCard1;
  CHECK(std::fabs(card1 / records.size() - 0.5) < 0.01);
}

TEST_CASE("empirical shares converge to the choice probability") {
  const AttributeSchema s = DefaultSchema();
  const auto design = published::Design();
  const auto plan = published::Plan();
  const Eigen::VectorXd beta = published::Utility().Vector(s);
  SimulationOptions opt;
  opt.seed = 2024;
  opt.respondents = 20000;
  const auto records =
      SimulateResponses(plan, design, s, published::Utility(), opt);
  std::vector<double> wins(9, 0);
  for (const auto& r : records) wins[r.pair] += r.chosen == Choice::kCard1;
  for (std::size_t k = 0; k < 9; ++k) {
    const auto [c1, c2] = plan.pairs[k];
    const double p = ChoiceProbability(Encode(design.cards[c1], s, false),
                                       Encode(design.cards[c2], s, false), beta);
    const double sigma = std::sqrt(p * (1 - p) / opt.respondents);
    CHECK(std::fabs(wins[k] / opt.respondents - p) < 3 * sigma);
  }
}

TEST_CASE("true utility vector round-trips through the schema") {
  const AttributeSchema s = DefaultSchema();
  const TrueUtility u = published::Utility();
  CHECK(TrueUtility::FromVector(u.Vector(s), s).beta == u.beta);
  TrueUtility missing;
  missing.beta["FAR"] = 1;
  CHECK_THROWS_AS(missing.Vector(s), ValidationError);
}

}  // namespace
}  // namespace cjrisk
