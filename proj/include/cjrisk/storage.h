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

// Project bundle: a directory holding every artifact of a study.
//
//   manifest.json     format_version, design/plan seeds, design criterion
//   schema.json       {"attributes":[{"name":..,"levels":[..]}]}
//   design.csv        Index,<attribute>...        (level labels)
//   pairs.csv         Number,Card1,Card2          (card numbers)
//   responses.csv     respondent_id,pair_number,chosen   (chosen in {1,2})
//   estimate.json     coefficients + fit metadata
//   scenarios.json    named risk scenarios
//   risk_report.json  risk grid, per-cell alpha/FPIR/C_identify/flagged
//   risk_report.csv   C_identify only; written alongside the JSON
//
// All files are UTF-8, CSVs are comma separated with a mandatory header.
// Writers are deterministic: saving a loaded bundle reproduces its files
// byte for byte.

#ifndef CJRISK_STORAGE_H_
#define CJRISK_STORAGE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cjrisk/design.h"
#include "cjrisk/estimate.h"
#include "cjrisk/risk.h"
#include "cjrisk/schema.h"
#include "cjrisk/simulate.h"
#include "json.hpp"

namespace cjrisk {

inline constexpr int kFormatVersion = 1;

struct NamedScenario {
  std::string name;
  RiskScenario scenario;

  bool operator==(const NamedScenario&) const = default;
};

struct ProjectBundle {
  int format_version = kFormatVersion;
  std::optional<AttributeSchema> schema;
  std::optional<FractionalDesign> design;
  std::optional<PairingPlan> plan;
  std::optional<std::vector<ChoiceRecord>> responses;
  std::optional<UtilityEstimate> estimate;
  std::optional<std::vector<NamedScenario>> scenarios;
  std::optional<RiskGrid> risk_report;

  // Throws IntegrityError naming the first dangling reference.
  void Validate() const;
  bool operator==(const ProjectBundle&) const = default;
};

// Writes every present component and removes files of absent ones. Holds the
// directory lock for the duration.
void SaveBundle(const ProjectBundle& bundle, const std::filesystem::path& dir);
// Throws ParseError (with file, line and field) on malformed content,
// IntegrityError on dangling references, Error on unsupported versions.
ProjectBundle LoadBundle(const std::filesystem::path& dir);
// LoadBundle, or an empty bundle when `dir` has no manifest yet.
ProjectBundle LoadOrCreateBundle(const std::filesystem::path& dir);

// Advisory single-writer lock: an exclusively created `.lock` file, removed
// on destruction. Throws ConflictError when another writer holds it.
class BundleLock {
 public:
  explicit BundleLock(const std::filesystem::path& dir);
  ~BundleLock();
  BundleLock(const BundleLock&) = delete;
  BundleLock& operator=(const BundleLock&) = delete;

 private:
  std::filesystem::path path_;
};

// Individual formats. `source` names the file in error messages.
std::string DesignToCsv(const FractionalDesign& design,
                        const AttributeSchema& schema);
FractionalDesign DesignFromCsv(std::string_view text,
                               const AttributeSchema& schema,
                               const std::string& source = "design.csv");
std::string PlanToCsv(const PairingPlan& plan);
PairingPlan PlanFromCsv(std::string_view text,
                        const std::string& source = "pairs.csv");
std::string ResponsesHeader();
std::string ResponseToCsvRow(const ChoiceRecord& record);
std::string ResponsesToCsv(const std::vector<ChoiceRecord>& records);
std::vector<ChoiceRecord> ResponsesFromCsv(
    std::string_view text, const std::string& source = "responses.csv");

nlohmann::json ScenariosToJson(const std::vector<NamedScenario>& scenarios);
std::vector<NamedScenario> ScenariosFromJson(const nlohmann::json& doc);

std::string ReadFile(const std::filesystem::path& path);
// Writes through a temporary file and rename.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view contents);
// Formats JSON with two-space indentation and a trailing newline.
std::string DumpJson(const nlohmann::json& doc);
nlohmann::json ParseJson(std::string_view text, const std::string& source);

}  // namespace cjrisk

#endif  // CJRISK_STORAGE_H_
