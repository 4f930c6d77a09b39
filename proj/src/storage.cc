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

#include "cjrisk/storage.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "cjrisk/error.h"
#include "json.hpp"

namespace cjrisk {
namespace fs = std::filesystem;
namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kSchemaFile = "schema.json";
constexpr const char* kDesignFile = "design.csv";
constexpr const char* kPlanFile = "pairs.csv";
constexpr const char* kResponsesFile = "responses.csv";
constexpr const char* kEstimateFile = "estimate.json";
constexpr const char* kScenariosFile = "scenarios.json";
constexpr const char* kRiskJsonFile = "risk_report.json";
constexpr const char* kRiskCsvFile = "risk_report.csv";

struct CsvRow {
  int line = 0;
  std::vector<std::string> fields;
};

std::vector<std::string> SplitFields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Parses a headed CSV and checks the header against `expected`.
std::vector<CsvRow> ParseCsv(std::string_view text, const std::string& source,
                             const std::vector<std::string>& expected) {
  std::vector<CsvRow> rows;
  int line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto fields = SplitFields(line);
    if (!header_seen) {
      header_seen = true;
      if (fields != expected) {
        std::string want;
        for (const auto& f : expected) want += (want.empty() ? "" : ",") + f;
        throw ParseError(source, line_no, "header",
                         "expected header '" + want + "'");
      }
      continue;
    }
    if (fields.size() != expected.size()) {
      throw ParseError(source, line_no, "",
                       "expected " + std::to_string(expected.size()) +
                           " fields, found " + std::to_string(fields.size()));
    }
    rows.push_back({line_no, std::move(fields)});
  }
  if (!header_seen) throw ParseError(source, 0, "header", "missing header row");
  return rows;
}

long long ParseInt(const std::string& s, const std::string& source, int line,
                   const std::string& field) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(source, line, field, "'" + s + "' is not an integer");
  }
  return v;
}

bool IsCsvSafe(const std::string& s) {
  return !s.empty() && s.find_first_of(",\"\r\n") == std::string::npos;
}

nlohmann::json LoadJsonFile(const fs::path& path) {
  return ParseJson(ReadFile(path), path.filename().string());
}

// Wraps a component loader so that semantic errors carry the file name.
template <typename F>
auto WithSource(const std::string& source, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ParseError(source, 0, "", e.what());
  }
}

}  // namespace

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileAtomic(const fs::path& path, std::string_view contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string DumpJson(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

nlohmann::json ParseJson(std::string_view text, const std::string& source) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    int line = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ParseError(source, line, "", e.what());
  }
}

BundleLock::BundleLock(const fs::path& dir) : path_(dir / ".lock") {
  int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    if (errno == EEXIST) {
      throw ConflictError("bundle " + dir.string() +
                          " is locked by another writer (remove " +
                          path_.string() + " if stale)");
    }
    throw Error("cannot create lock " + path_.string() + ": " +
                std::strerror(errno));
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

BundleLock::~BundleLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

std::string DesignToCsv(const FractionalDesign& design,
                        const AttributeSchema& schema) {
  std::string out = "Index";
  for (const auto& a : schema.attributes()) out += "," + a.name;
  out += "\n";
  for (std::size_t i = 0; i < design.cards.size(); ++i) {
    const auto& card = design.cards[i];
    ValidateCard(card, schema);
    out += std::to_string(card.index.value_or(static_cast<int>(i) + 1));
    for (std::size_t a = 0; a < schema.size(); ++a) {
      out += "," + schema[a].levels[card.levels[a]];
    }
    out += "\n";
  }
  return out;
}

FractionalDesign DesignFromCsv(std::string_view text,
                               const AttributeSchema& schema,
                               const std::string& source) {
  std::vector<std::string> header = {"Index"};
  for (const auto& a : schema.attributes()) header.push_back(a.name);
  FractionalDesign design;
  for (const auto& row : ParseCsv(text, source, header)) {
    const auto index = ParseInt(row.fields[0], source, row.line, "Index");
    if (index != static_cast<long long>(design.cards.size()) + 1) {
      throw ParseError(source, row.line, "Index",
                       "cards must be numbered 1..n in order");
    }
    ConjointCard card;
    card.index = static_cast<int>(index);
    for (std::size_t a = 0; a < schema.size(); ++a) {
      const std::string& label = row.fields[a + 1];
      const auto& levels = schema[a].levels;
      std::size_t k = 0;
      while (k < levels.size() && levels[k] != label) ++k;
      if (k == levels.size()) {
        throw ParseError(source, row.line, schema[a].name,
                         "unknown level '" + label + "'");
      }
      card.levels.push_back(k);
    }
    design.cards.push_back(std::move(card));
  }
  design.criterion_value = DesignCriterion(design.cards, schema);
  return design;
}

std::string PlanToCsv(const PairingPlan& plan) {
  std::string out = "Number,Card1,Card2\n";
  for (std::size_t i = 0; i < plan.pairs.size(); ++i) {
    out += std::to_string(i + 1) + "," +
           std::to_string(plan.pairs[i].first + 1) + "," +
           std::to_string(plan.pairs[i].second + 1) + "\n";
  }
  return out;
}

PairingPlan PlanFromCsv(std::string_view text, const std::string& source) {
  PairingPlan plan;
  for (const auto& row :
       ParseCsv(text, source, {"Number", "Card1", "Card2"})) {
    const auto number = ParseInt(row.fields[0], source, row.line, "Number");
    if (number != static_cast<long long>(plan.pairs.size()) + 1) {
      throw ParseError(source, row.line, "Number",
                       "pairs must be numbered 1..n in order");
    }
    const auto c1 = ParseInt(row.fields[1], source, row.line, "Card1");
    const auto c2 = ParseInt(row.fields[2], source, row.line, "Card2");
    if (c1 < 1) throw ParseError(source, row.line, "Card1", "must be >= 1");
    if (c2 < 1) throw ParseError(source, row.line, "Card2", "must be >= 1");
    plan.pairs.emplace_back(static_cast<std::size_t>(c1 - 1),
                            static_cast<std::size_t>(c2 - 1));
  }
  return plan;
}

std::string ResponsesHeader() { return "respondent_id,pair_number,chosen\n"; }

std::string ResponseToCsvRow(const ChoiceRecord& r) {
  if (!IsCsvSafe(r.respondent)) {
    throw ValidationError("respondent id '" + r.respondent +
                          "' cannot be stored");
  }
  return r.respondent + "," + std::to_string(r.pair + 1) + "," +
         std::to_string(static_cast<int>(r.chosen)) + "\n";
}

std::string ResponsesToCsv(const std::vector<ChoiceRecord>& records) {
  std::string out = ResponsesHeader();
  for (const auto& r : records) out += ResponseToCsvRow(r);
  return out;
}

std::vector<ChoiceRecord> ResponsesFromCsv(std::string_view text,
                                           const std::string& source) {
  std::vector<ChoiceRecord> records;
  for (const auto& row : ParseCsv(
           text, source, {"respondent_id", "pair_number", "chosen"})) {
    ChoiceRecord r;
    r.respondent = row.fields[0];
    if (r.respondent.empty()) {
      throw ParseError(source, row.line, "respondent_id", "empty identifier");
    }
    const auto pair = ParseInt(row.fields[1], source, row.line, "pair_number");
    if (pair < 1) {
      throw ParseError(source, row.line, "pair_number", "must be >= 1");
    }
    r.pair = static_cast<std::size_t>(pair - 1);
    const auto chosen = ParseInt(row.fields[2], source, row.line, "chosen");
    if (chosen != 1 && chosen != 2) {
      throw ParseError(source, row.line, "chosen", "must be 1 or 2");
    }
    r.chosen = chosen == 1 ? Choice::kCard1 : Choice::kCard2;
    records.push_back(std::move(r));
  }
  return records;
}

nlohmann::json ScenariosToJson(const std::vector<NamedScenario>& scenarios) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : scenarios) {
    out.push_back({{"name", s.name},
                   {"levels", s.scenario.levels},
                   {"p_fa", s.scenario.rates.p_fa},
                   {"p_fr", s.scenario.rates.p_fr},
                   {"n", s.scenario.rates.n},
                   {"c_open", s.scenario.c_open},
                   {"c_close", s.scenario.c_close}});
  }
  return out;
}

std::vector<NamedScenario> ScenariosFromJson(const nlohmann::json& doc) {
  std::vector<NamedScenario> out;
  try {
    for (const auto& s : doc) {
      NamedScenario ns;
      ns.name = s.at("name").get<std::string>();
      ns.scenario.levels = s.at("levels").get<LevelMap>();
      ns.scenario.rates.p_fa = s.at("p_fa").get<double>();
      ns.scenario.rates.p_fr = s.at("p_fr").get<double>();
      ns.scenario.rates.n = s.at("n").get<std::size_t>();
      ns.scenario.c_open = s.at("c_open").get<double>();
      ns.scenario.c_close = s.at("c_close").get<double>();
      ns.scenario.rates.Validate();
      out.push_back(std::move(ns));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("scenario document: ") + e.what());
  }
  return out;
}

void ProjectBundle::Validate() const {
  if (design) {
    if (!schema) throw IntegrityError("design present without schema");
    for (const auto& c : design->cards) {
      try {
        ValidateCard(c, *schema);
      } catch (const ValidationError& e) {
        throw IntegrityError(std::string("design card: ") + e.what());
      }
    }
  }
  if (plan) {
    if (!design) throw IntegrityError("pairing plan present without design");
    ValidatePlan(*plan, *design);
  }
  if (responses) {
    if (!plan) throw IntegrityError("responses present without pairing plan");
    for (std::size_t i = 0; i < responses->size(); ++i) {
      const auto& r = (*responses)[i];
      if (r.pair >= plan->size()) {
        throw IntegrityError("response " + std::to_string(i + 1) + " (" +
                             r.respondent + ") references pair " +
                             std::to_string(r.pair + 1) + " but the plan has " +
                             std::to_string(plan->size()) + " pairs");
      }
    }
  }
  if (estimate && schema) {
    for (const auto& row : estimate->rows) {
      if (!schema->IndexOf(row.attribute)) {
        throw IntegrityError("estimate references unknown attribute '" +
                             row.attribute + "'");
      }
    }
  }
  if (scenarios && schema) {
    for (const auto& s : *scenarios) {
      try {
        ValidateLevels(s.scenario.levels, *schema);
      } catch (const ValidationError& e) {
        throw IntegrityError("scenario '" + s.name + "': " + e.what());
      }
    }
  }
}

void SaveBundle(const ProjectBundle& bundle, const fs::path& dir) {
  bundle.Validate();
  fs::create_directories(dir);
  BundleLock lock(dir);

  auto put = [&](const char* name, bool present, auto&& render) {
    const fs::path path = dir / name;
    if (present) {
      WriteFileAtomic(path, render());
    } else {
      std::error_code ec;
      fs::remove(path, ec);
    }
  };

  nlohmann::json manifest = {{"format_version", bundle.format_version}};
  manifest["design"] =
      bundle.design ? nlohmann::json{{"seed", bundle.design->seed},
                                     {"criterion_value",
                                      bundle.design->criterion_value}}
                    : nlohmann::json(nullptr);
  manifest["plan"] = bundle.plan
                         ? nlohmann::json{{"seed", bundle.plan->seed}}
                         : nlohmann::json(nullptr);

  put(kSchemaFile, bundle.schema.has_value(),
      [&] { return DumpJson(SchemaToJson(*bundle.schema)); });
  put(kDesignFile, bundle.design.has_value(),
      [&] { return DesignToCsv(*bundle.design, *bundle.schema); });
  put(kPlanFile, bundle.plan.has_value(),
      [&] { return PlanToCsv(*bundle.plan); });
  put(kResponsesFile, bundle.responses.has_value(),
      [&] { return ResponsesToCsv(*bundle.responses); });
  put(kEstimateFile, bundle.estimate.has_value(),
      [&] { return DumpJson(EstimateToJson(*bundle.estimate)); });
  put(kScenariosFile, bundle.scenarios.has_value(),
      [&] { return DumpJson(ScenariosToJson(*bundle.scenarios)); });
  put(kRiskJsonFile, bundle.risk_report.has_value(),
      [&] { return DumpJson(GridToJson(*bundle.risk_report)); });
  put(kRiskCsvFile, bundle.risk_report.has_value(),
      [&] { return GridToCsv(*bundle.risk_report); });
  // Manifest last: a bundle is only loadable once all parts are on disk.
  put(kManifest, true, [&] { return DumpJson(manifest); });
}

ProjectBundle LoadBundle(const fs::path& dir) {
  const fs::path manifest_path = dir / kManifest;
  if (!fs::exists(manifest_path)) {
    throw Error("no bundle at " + dir.string() + " (missing " + kManifest +
                ")");
  }
  const nlohmann::json manifest = LoadJsonFile(manifest_path);
  ProjectBundle b;
  try {
    b.format_version = manifest.at("format_version").get<int>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(kManifest, 0, "format_version", "missing or not an integer");
  }
  if (b.format_version > kFormatVersion || b.format_version < 1) {
    throw Error("bundle format_version " + std::to_string(b.format_version) +
                " is not supported (this reader handles up to " +
                std::to_string(kFormatVersion) + ")");
  }
  auto has = [&](const char* name) { return fs::exists(dir / name); };

  if (has(kSchemaFile)) {
    b.schema = WithSource(kSchemaFile, [&] {
      return SchemaFromJson(LoadJsonFile(dir / kSchemaFile));
    });
  }
  if (has(kDesignFile)) {
    if (!b.schema) throw IntegrityError("design.csv present without schema");
    b.design = DesignFromCsv(ReadFile(dir / kDesignFile), *b.schema);
    const auto& meta = manifest.value("design", nlohmann::json());
    if (meta.is_object()) {
      try {
        b.design->seed = meta.at("seed").get<std::uint64_t>();
        b.design->criterion_value = meta.at("criterion_value").get<double>();
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(kManifest, 0, "design", e.what());
      }
    }
  }
  if (has(kPlanFile)) {
    b.plan = PlanFromCsv(ReadFile(dir / kPlanFile));
    const auto& meta = manifest.value("plan", nlohmann::json());
    if (meta.is_object()) {
      try {
        b.plan->seed = meta.at("seed").get<std::uint64_t>();
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(kManifest, 0, "plan", e.what());
      }
    }
  }
  if (has(kResponsesFile)) {
    b.responses = ResponsesFromCsv(ReadFile(dir / kResponsesFile));
  }
  if (has(kEstimateFile)) {
    b.estimate = WithSource(kEstimateFile, [&] {
      return EstimateFromJson(LoadJsonFile(dir / kEstimateFile));
    });
  }
  if (has(kScenariosFile)) {
    b.scenarios = WithSource(kScenariosFile, [&] {
      return ScenariosFromJson(LoadJsonFile(dir / kScenariosFile));
    });
  }
  if (has(kRiskJsonFile)) {
    b.risk_report = WithSource(kRiskJsonFile, [&] {
      return GridFromJson(LoadJsonFile(dir / kRiskJsonFile));
    });
  }
  b.Validate();
  return b;
}

ProjectBundle LoadOrCreateBundle(const fs::path& dir) {
  if (!fs::exists(dir / kManifest)) return ProjectBundle{};
  return LoadBundle(dir);
}

}  // namespace cjrisk
