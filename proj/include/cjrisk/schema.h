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

// Attribute vocabulary shared by every stage of the pipeline: risk-factor
// attributes, their deterrence-ordered levels, conjoint cards (profiles) and
// the numeric coding of a card used by design criteria and likelihoods.
//
// Coding is linear in the level: level k of an attribute contributes the
// regressor value k, so each attribute carries a single coefficient. Level 0
// is the weakest deterrent and level L-1 the strongest.

#ifndef CJRISK_SCHEMA_H_
#define CJRISK_SCHEMA_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "json.hpp"

namespace cjrisk {

struct Attribute {
  std::string name;
  std::vector<std::string> levels;  // deterrence order

  std::size_t level_count() const { return levels.size(); }
  bool operator==(const Attribute&) const = default;
};

// Immutable once constructed; the constructor enforces the invariants (at
// least two levels per attribute, unique attribute names, unique labels
// within an attribute).
class AttributeSchema {
 public:
  explicit AttributeSchema(std::vector<Attribute> attributes);

  const std::vector<Attribute>& attributes() const { return attributes_; }
  std::size_t size() const { return attributes_.size(); }
  const Attribute& operator[](std::size_t i) const { return attributes_[i]; }

  std::optional<std::size_t> IndexOf(const std::string& name) const;
  // Throws ValidationError for unknown names.
  std::size_t RequireIndex(const std::string& name) const;
  // Throws ValidationError when `label` is not a level of attribute `a`.
  std::size_t LevelIndex(std::size_t a, const std::string& label) const;

  // Product of level counts.
  std::size_t CombinationCount() const;
  std::vector<std::string> Names() const;

  bool operator==(const AttributeSchema&) const = default;

 private:
  std::vector<Attribute> attributes_;
};

// Reference schema: FAR (4 levels), Camera, Staff, Friendship (No/Yes) and
// Congestion (empty/normal/crowded).
AttributeSchema DefaultSchema();

// One profile: a level index for every attribute, stored in schema order.
// `index` is the 1-based card number when the card belongs to a design.
struct ConjointCard {
  std::vector<std::size_t> levels;
  std::optional<int> index;

  bool SameProfile(const ConjointCard& other) const {
    return levels == other.levels;
  }
  bool operator==(const ConjointCard&) const = default;
};

using LevelMap = std::map<std::string, std::size_t>;

// Builds a card from an attribute-name -> level-index map covering every
// attribute exactly once.
ConjointCard MakeCard(const AttributeSchema& schema, const LevelMap& assignment,
                      std::optional<int> index = std::nullopt);
// Builds a card from attribute-name -> level-label pairs.
ConjointCard MakeCardFromLabels(
    const AttributeSchema& schema,
    const std::map<std::string, std::string>& labels,
    std::optional<int> index = std::nullopt);
LevelMap Assignment(const ConjointCard& card, const AttributeSchema& schema);

void ValidateCard(const ConjointCard& card, const AttributeSchema& schema);
// Validates a (possibly partial) level map: every key names an attribute and
// every level is in range.
void ValidateLevels(const LevelMap& levels, const AttributeSchema& schema);

using ModelRow = Eigen::VectorXd;

// Numeric image of a card. With `with_intercept` a leading 1 is prepended.
ModelRow Encode(const ConjointCard& card, const AttributeSchema& schema,
                bool with_intercept);
// Inverse of Encode. Accepts rows with or without the intercept column.
ConjointCard Decode(const ModelRow& row, const AttributeSchema& schema);

// Stacks encoded cards as rows.
Eigen::MatrixXd ModelMatrix(const std::vector<ConjointCard>& cards,
                            const AttributeSchema& schema,
                            bool with_intercept);

// {"attributes":[{"name":...,"levels":[...]}]}
nlohmann::json SchemaToJson(const AttributeSchema& schema);
AttributeSchema SchemaFromJson(const nlohmann::json& doc);

}  // namespace cjrisk

#endif  // CJRISK_SCHEMA_H_
