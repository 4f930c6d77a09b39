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

#include "cjrisk/published.h"
#include "cjrisk/reproduce.h"
#include "doctest.h"

namespace cjrisk {
namespace {

const ReproducedCell& Cell(const ReproductionReport& r, const std::string& uc,
                           const std::string& far) {
  for (const auto& c : r.cells) {
    if (c.use_case == uc && c.far_label == far) return c;
  }
  throw std::runtime_error("missing cell");
}

const ColumnVerdict& Column(const ReproductionReport& r, const std::string& uc) {
  for (const auto& c : r.columns) {
    if (c.use_case == uc) return c;
  }
  throw std::runtime_error("missing column");
}

TEST_CASE("printed grid fixture") {
  const auto cells = published::PrintedGrid();
  CHECK(cells.size() == 12);
}

TEST_CASE("reproduction verdicts") {
  const ReproductionReport r = Reproduce(1e-2, 10000);
  CHECK(r.cells.size() == 12);

  const auto& high = Column(r, "High-secure");
  CHECK(high.reproducible);
  CHECK(high.matched == 4);

  CHECK(Cell(r, "Low-secure", "10^-2").computed == 0.5);
  CHECK(std::fabs(Cell(r, "Low-secure", "10^-3").computed - 0.397) <= 0.002);
  CHECK(!Cell(r, "Low-secure", "10^-3").match);
  CHECK(Cell(r, "Low-secure", "10^-4").match);
  CHECK(Cell(r, "Low-secure", "10^-5").match);

  const auto& mid = Column(r, "Mid-secure");
  CHECK(!mid.reproducible);
  CHECK(mid.note.find("NON-REPRODUCIBLE") != std::string::npos);

  CHECK(Cell(r, "High-secure", "10^-3").computed_lower);
  CHECK(Cell(r, "High-secure", "10^-3").printed_lower);

  const std::string text = FormatReproductionReport(r);
  CHECK(text.find("DEVIATION") != std::string::npos);
  CHECK(text.find("0.406") != std::string::npos);
  const auto doc = ReproductionToJson(r);
  CHECK(doc["cells"].size() == 12);
}

TEST_CASE("tolerance scale") {
  CHECK(ReproductionTolerance(0.315) == 0.002);
  CHECK(ReproductionTolerance(4.99e-4) == 2e-5);
}

}  // namespace
}  // namespace cjrisk
