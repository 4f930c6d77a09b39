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

#include <map>

#include "cjrisk/design.h"
#include "cjrisk/error.h"
#include "cjrisk/published.h"
#include "cjrisk/storage.h"
#include "doctest.h"
#include "oracles.h"

namespace cjrisk {
namespace {

namespace fs = std::filesystem;

std::map<std::string, std::string> Snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    files[e.path().filename().string()] = ReadFile(e.path());
  }
  return files;
}

ProjectBundle FullBundle() {
  const AttributeSchema s = DefaultSchema();
  ProjectBundle b;
  b.schema = s;
  b.design = published::Design();
  b.plan = published::Plan();
  SimulationOptions opt;
  opt.seed = 5;
  opt.respondents = 40;
  b.responses =
      SimulateResponses(*b.plan, *b.design, s, published::Utility(), opt);
  b.estimate = Fit(*b.responses, *b.plan, *b.design, s);
  RiskScenario sc;
  sc.levels = {{"FAR", 3}, {"Camera", 1}, {"Staff", 1}, {"Friendship", 1},
               {"Congestion", 2}};
  sc.rates = {1e-5, 1e-2, 10000};
  b.scenarios = std::vector<NamedScenario>{{"high", sc}};
  GridRequest g;
  g.use_cases = published::UseCases();
  g.far_settings = FarSettings(s);
  g.reference = GridReference{"Low-secure", "10^-4"};
  b.risk_report = CompareUseCases(
      g, AlphaModel::CoefficientWeighted(published::Estimate()), s);
  return b;
}

TEST_CASE("empty bundle round-trips") {
  const auto dir = oracle::TempDir("empty");
  SaveBundle(ProjectBundle{}, dir);
  CHECK(LoadBundle(dir) == ProjectBundle{});
}

TEST_CASE("every component round-trips and re-saves byte-identically") {
  const auto dir = oracle::TempDir("full");
  const ProjectBundle b = FullBundle();
  SaveBundle(b, dir);
  const auto first = Snapshot(dir);
  for (const char* name :
       {"manifest.json", "schema.json", "design.csv", "pairs.csv",
        "responses.csv", "estimate.json", "scenarios.json", "risk_report.json",
        "risk_report.csv"}) {
    CHECK_MESSAGE(first.count(name) == 1, name);
  }
  const ProjectBundle loaded = LoadBundle(dir);
  CHECK(loaded == b);
  CHECK(Snapshot(dir) == first);  // loading never mutates files

  const auto dir2 = oracle::TempDir("full2");
  SaveBundle(loaded, dir2);
  CHECK(Snapshot(dir2) == first);
}

TEST_CASE("printed design and plan keep the published layout") {
  const auto dir = oracle::TempDir("printed");
  ProjectBundle b;
  b.schema = DefaultSchema();
  b.design = published::Design();
  b.plan = published::Plan();
  SaveBundle(b, dir);
  const std::string pairs = ReadFile(dir / "pairs.csv");
  CHECK(pairs.rfind("Number,Card1,Card2\n1,1,5\n2,9,7\n", 0) == 0);
  const std::string design = ReadFile(dir / "design.csv");
  CHECK(design.rfind("Index,FAR,Camera,Staff,Friendship,Congestion\n"
                     "1,10^-2,Yes,Yes,Yes,empty\n",
                     0) == 0);
  const ProjectBundle loaded = LoadBundle(dir);
  CHECK(*loaded.plan == published::Plan());
  CHECK(*loaded.design == published::Design());
  SaveBundle(loaded, dir);
  CHECK(ReadFile(dir / "pairs.csv") == pairs);
  CHECK(ReadFile(dir / "design.csv") == design);
}

TEST_CASE("dangling references are integrity errors") {
  ProjectBundle b;
  b.schema = DefaultSchema();
  b.design = published::Design();
  b.plan = published::Plan();
  b.responses = std::vector<ChoiceRecord>{{"r1", 9, Choice::kCard1}};
  CHECK_THROWS_AS(b.Validate(), IntegrityError);
  CHECK_THROWS_AS(SaveBundle(b, oracle::TempDir("dangling")), IntegrityError);

  // The same reference arriving from disk.
  const auto dir = oracle::TempDir("dangling-disk");
  b.responses = std::vector<ChoiceRecord>{{"r1", 0, Choice::kCard1}};
  SaveBundle(b, dir);
  WriteFileAtomic(dir / "responses.csv",
                  "respondent_id,pair_number,chosen\nr1,10,1\n");
  try {
    LoadBundle(dir);
    FAIL("expected IntegrityError");
  } catch (const IntegrityError& e) {
    CHECK(std::string(e.what()).find("10") != std::string::npos);
  }

  ProjectBundle no_design;
  no_design.plan = published::Plan();
  CHECK_THROWS_AS(no_design.Validate(), IntegrityError);
}

TEST_CASE("malformed files report file, line and field") {
  const auto dir = oracle::TempDir("malformed");
  ProjectBundle b;
  b.schema = DefaultSchema();
  b.design = published::Design();
  b.plan = published::Plan();
  SaveBundle(b, dir);

  WriteFileAtomic(dir / "pairs.csv", "Number,Card1,Card2\n1,1,5\n2,x,7\n");
  try {
    LoadBundle(dir);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.file().find("pairs.csv") != std::string::npos);
    CHECK(e.line() == 3);
    CHECK(e.field() == "Card1");
  }

  SaveBundle(b, dir);
  std::string design = ReadFile(dir / "design.csv");
  design.replace(design.find("empty"), 5, "empti");
  WriteFileAtomic(dir / "design.csv", design);
  try {
    LoadBundle(dir);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.field() == "Congestion");
  }

  SaveBundle(b, dir);
  WriteFileAtomic(dir / "schema.json", "{\n  \"attributes\": [\n  oops\n}\n");
  try {
    LoadBundle(dir);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }

  CHECK_THROWS_AS(
      ResponsesFromCsv("respondent_id,pair_number,chosen\nr,1,3\n"),
      ParseError);
  CHECK_THROWS_AS(ResponsesFromCsv("who,what\n"), ParseError);
}

TEST_CASE("unsupported format versions are rejected") {
  const auto dir = oracle::TempDir("version");
  SaveBundle(ProjectBundle{}, dir);
  WriteFileAtomic(dir / "manifest.json", "{\"format_version\": 2}\n");
  try {
    LoadBundle(dir);
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("format_version") != std::string::npos);
  }
  CHECK_THROWS_AS(LoadBundle(oracle::TempDir("nomanifest")), Error);
  CHECK(LoadOrCreateBundle(oracle::TempDir("fresh")) == ProjectBundle{});
}

TEST_CASE("single writer per bundle directory") {
  const auto dir = oracle::TempDir("lock");
  {
    BundleLock lock(dir);
    CHECK_THROWS_AS(BundleLock{dir}, ConflictError);
    CHECK_THROWS_AS(SaveBundle(ProjectBundle{}, dir), ConflictError);
    // Readers are not blocked.
    CHECK_NOTHROW(LoadOrCreateBundle(dir));
  }
  CHECK_NOTHROW(SaveBundle(ProjectBundle{}, dir));
  CHECK(!fs::exists(dir / ".lock"));
}

TEST_CASE("removing a component deletes its file") {
  const auto dir = oracle::TempDir("remove");
  ProjectBundle b = FullBundle();
  SaveBundle(b, dir);
  b.responses.reset();
  b.estimate.reset();
  SaveBundle(b, dir);
  CHECK(!fs::exists(dir / "responses.csv"));
  CHECK(!fs::exists(dir / "estimate.json"));
  CHECK(LoadBundle(dir) == b);
}

}  // namespace
}  // namespace cjrisk
