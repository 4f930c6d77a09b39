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

// Experimental design for the choice survey:
//
//   1. FullFactorial enumerates every level combination.
//   2. FederovSelect picks a D-optimal n-card subset by point exchange.
//   3. MakePairs turns the selected cards into a randomized list of
//      (card1, card2) questions with no card paired against itself.
//
// The D-criterion is det(X'X) for the intercept-augmented linear main-effects
// model matrix X.

#ifndef CJRISK_DESIGN_H_
#define CJRISK_DESIGN_H_

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "Eigen/Core"
#include "cjrisk/schema.h"

namespace cjrisk {

struct CandidateSet {
  std::vector<ConjointCard> cards;
};

struct FractionalDesign {
  std::vector<ConjointCard> cards;  // card numbers 1..n in order
  double criterion_value = 0.0;     // det(X'X), intercept included
  std::uint64_t seed = 0;

  bool operator==(const FractionalDesign&) const = default;
};

// Each entry is a pair of 0-based rows of the design. Card numbers shown to
// respondents are row + 1.
struct PairingPlan {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::uint64_t seed = 0;

  std::size_t size() const { return pairs.size(); }
  bool operator==(const PairingPlan&) const = default;
};

// Lexicographic enumeration, first attribute varying slowest.
CandidateSet FullFactorial(const AttributeSchema& schema);

// det(X'X) with the intercept column.
double DesignCriterion(const std::vector<ConjointCard>& cards,
                       const AttributeSchema& schema);

struct FederovOptions {
  std::size_t n = 9;
  std::size_t restarts = 20;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 1000;  // accepted swaps per restart
  std::size_t start_attempts = 100;   // random draws per restart
};

// One accepted swap. `predicted_ratio` is 1 + delta from the variance
// function; the determinants are computed from scratch.
struct ExchangeStep {
  std::size_t restart = 0;
  std::size_t design_position = 0;
  std::size_t candidate = 0;
  double predicted_ratio = 0.0;
  double det_before = 0.0;
  double det_after = 0.0;
};

struct FederovTrace {
  std::vector<ExchangeStep> steps;
  // Final criterion of every restart; 0 for restarts with no nonsingular
  // start.
  std::vector<double> restart_criteria;
};

// Federov point exchange. For every (design point, candidate) pair the gain
//
//   delta = d(x_in) - [d(x_out) d(x_in) - d(x_out, x_in)^2] - d(x_out),
//   d(x, y) = x' M^-1 y,  M = X'X
//
// is the relative change det(M_new)/det(M) - 1. The best improving swap is
// applied until none improves. Ties go to the lowest (design position,
// candidate index). Candidates already in the design are not eligible.
//
// Throws ConfigurationError when n is below the model column count or above
// the candidate count, DegenerateCandidateError when no restart finds a
// nonsingular start.
FractionalDesign FederovSelect(const CandidateSet& candidates,
                               const AttributeSchema& schema,
                               const FederovOptions& options,
                               FederovTrace* trace = nullptr);

// Shuffles two copies of the design with independent random keys and pairs
// rows. Whenever any row pairs identical profiles the keys are redrawn; after
// `max_retries` failed draws ImpossiblePairingError is thrown.
PairingPlan MakePairs(const FractionalDesign& design, std::uint64_t seed,
                      std::size_t max_retries = 1000);

// Checks plan rows reference the design and never pair a card with itself.
void ValidatePlan(const PairingPlan& plan, const FractionalDesign& design);

}  // namespace cjrisk

#endif  // CJRISK_DESIGN_H_
