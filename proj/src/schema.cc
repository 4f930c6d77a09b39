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

#include "cjrisk/schema.h"

#include <cmath>
#include <set>
#include <utility>

#include "cjrisk/error.h"
#include "json.hpp"

namespace cjrisk {
namespace {

// Labels end up in CSV cells unquoted.
bool IsCsvSafe(const std::string& s) {
  return !s.empty() && s.find_first_of(",\"\r\n") == std::string::npos;
}

}  // namespace

AttributeSchema::AttributeSchema(std::vector<Attribute> attributes)
    : attributes_(std::move(attributes)) {
  if (attributes_.empty()) {
    throw ValidationError("schema must define at least one attribute");
  }
  std::set<std::string> names;
  for (const Attribute& a : attributes_) {
    if (!IsCsvSafe(a.name)) {
      throw ValidationError("invalid attribute name '" + a.name + "'");
    }
    if (!names.insert(a.name).second) {
      throw ValidationError("duplicate attribute name '" + a.name + "'");
    }
    if (a.levels.size() < 2) {
      throw ValidationError("attribute '" + a.name +
                            "' needs at least two levels");
    }
    std::set<std::string> labels;
    for (const std::string& label : a.levels) {
      if (!IsCsvSafe(label)) {
        throw ValidationError("invalid level label '" + label +
                              "' for attribute '" + a.name + "'");
      }
      if (!labels.insert(label).second) {
        throw ValidationError("duplicate level '" + label +
                              "' for attribute '" + a.name + "'");
      }
    }
  }
}

std::optional<std::size_t> AttributeSchema::IndexOf(
    const std::string& name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t AttributeSchema::RequireIndex(const std::string& name) const {
  auto idx = IndexOf(name);
  if (!idx) throw ValidationError("unknown attribute '" + name + "'");
  return *idx;
}

std::size_t AttributeSchema::LevelIndex(std::size_t a,
                                        const std::string& label) const {
  const auto& levels = attributes_.at(a).levels;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (levels[k] == label) return k;
  }
  throw ValidationError("unknown level '" + label + "' for attribute '" +
                        attributes_[a].name + "'");
}

std::size_t AttributeSchema::CombinationCount() const {
  std::size_t n = 1;
  for (const Attribute& a : attributes_) n *= a.level_count();
  return n;
}

std::vector<std::string> AttributeSchema::Names() const {
  std::vector<std::string> names;
  names.reserve(attributes_.size());
  for (const Attribute& a : attributes_) names.push_back(a.name);
  return names;
}

AttributeSchema DefaultSchema() {
  return AttributeSchema({
      {"FAR", {"10^-2", "10^-3", "10^-4", "10^-5"}},
      {"Camera", {"No", "Yes"}},
      {"Staff", {"No", "Yes"}},
      {"Friendship", {"No", "Yes"}},
      {"Congestion", {"empty", "normal", "crowded"}},
  });
}

void ValidateCard(const ConjointCard& card, const AttributeSchema& schema) {
  if (card.levels.size() != schema.size()) {
    throw ValidationError("card assigns " + std::to_string(card.levels.size()) +
                          " attributes, schema has " +
                          std::to_string(schema.size()));
  }
  for (std::size_t a = 0; a < schema.size(); ++a) {
    if (card.levels[a] >= schema[a].level_count()) {
      throw ValidationError("level " + std::to_string(card.levels[a]) +
                            " out of range for attribute '" + schema[a].name +
                            "'");
    }
  }
}

void ValidateLevels(const LevelMap& levels, const AttributeSchema& schema) {
  for (const auto& [name, level] : levels) {
    std::size_t a = schema.RequireIndex(name);
    if (level >= schema[a].level_count()) {
      throw ValidationError("level " + std::to_string(level) +
                            " out of range for attribute '" + name + "'");
    }
  }
}

ConjointCard MakeCard(const AttributeSchema& schema, const LevelMap& assignment,
                      std::optional<int> index) {
  ValidateLevels(assignment, schema);
  if (assignment.size() != schema.size()) {
    throw ValidationError("card must assign every attribute exactly once");
  }
  ConjointCard card;
  card.index = index;
  card.levels.resize(schema.size());
  for (std::size_t a = 0; a < schema.size(); ++a) {
    card.levels[a] = assignment.at(schema[a].name);
  }
  return card;
}

ConjointCard MakeCardFromLabels(
    const AttributeSchema& schema,
    const std::map<std::string, std::string>& labels,
    std::optional<int> index) {
  LevelMap assignment;
  for (const auto& [name, label] : labels) {
    assignment[name] = schema.LevelIndex(schema.RequireIndex(name), label);
  }
  return MakeCard(schema, assignment, index);
}

LevelMap Assignment(const ConjointCard& card, const AttributeSchema& schema) {
  ValidateCard(card, schema);
  LevelMap out;
  for (std::size_t a = 0; a < schema.size(); ++a) {
    out[schema[a].name] = card.levels[a];
  }
  return out;
}

ModelRow Encode(const ConjointCard& card, const AttributeSchema& schema,
                bool with_intercept) {
  ValidateCard(card, schema);
  const Eigen::Index offset = with_intercept ? 1 : 0;
  ModelRow row(static_cast<Eigen::Index>(schema.size()) + offset);
  if (with_intercept) row[0] = 1.0;
  for (std::size_t a = 0; a < schema.size(); ++a) {
    row[static_cast<Eigen::Index>(a) + offset] =
        static_cast<double>(card.levels[a]);
  }
  return row;
}

ConjointCard Decode(const ModelRow& row, const AttributeSchema& schema) {
  const auto k = static_cast<Eigen::Index>(schema.size());
  Eigen::Index offset = 0;
  if (row.size() == k + 1) {
    if (row[0] != 1.0) throw ValidationError("intercept column must be 1");
    offset = 1;
  } else if (row.size() != k) {
    throw ValidationError("row length does not match schema");
  }
  ConjointCard card;
  card.levels.resize(schema.size());
  for (std::size_t a = 0; a < schema.size(); ++a) {
    double v = row[static_cast<Eigen::Index>(a) + offset];
    if (v < 0 || v != std::floor(v)) {
      throw ValidationError("row entry for '" + schema[a].name +
                            "' is not a level code");
    }
    card.levels[a] = static_cast<std::size_t>(v);
  }
  ValidateCard(card, schema);
  return card;
}

Eigen::MatrixXd ModelMatrix(const std::vector<ConjointCard>& cards,
                            const AttributeSchema& schema,
                            bool with_intercept) {
  const Eigen::Index cols =
      static_cast<Eigen::Index>(schema.size()) + (with_intercept ? 1 : 0);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(cards.size()), cols);
  for (std::size_t i = 0; i < cards.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) =
        Encode(cards[i], schema, with_intercept).transpose();
  }
  return x;
}

nlohmann::json SchemaToJson(const AttributeSchema& schema) {
  nlohmann::json attrs = nlohmann::json::array();
  for (const Attribute& a : schema.attributes()) {
    attrs.push_back({{"name", a.name}, {"levels", a.levels}});
  }
  return {{"attributes", attrs}};
}

AttributeSchema SchemaFromJson(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("attributes") ||
      !doc["attributes"].is_array()) {
    throw ValidationError("schema document needs an 'attributes' array");
  }
  std::vector<Attribute> attrs;
  for (const auto& item : doc["attributes"]) {
    if (!item.is_object() || !item.contains("name") ||
        !item["name"].is_string() || !item.contains("levels") ||
        !item["levels"].is_array()) {
      throw ValidationError(
          "each attribute needs a string 'name' and a 'levels' array");
    }
    Attribute a;
    a.name = item["name"].get<std::string>();
    for (const auto& level : item["levels"]) {
      if (!level.is_string()) {
        throw ValidationError("level labels of '" + a.name +
                              "' must be strings");
      }
      a.levels.push_back(level.get<std::string>());
    }
    attrs.push_back(std::move(a));
  }
  return AttributeSchema(std::move(attrs));
}

}  // namespace cjrisk
