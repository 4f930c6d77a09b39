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

#include "cjrisk/reproduce.h"

#include <cmath>

#include "cjrisk/published.h"
#include "fmt/format.h"
#include "json.hpp"

namespace cjrisk {

double ReproductionTolerance(double printed) {
  return std::fabs(printed) < 1e-3 ? 2e-5 : 0.002;
}

ReproductionReport Reproduce(double p_fr, std::size_t n) {
  const AttributeSchema schema = DefaultSchema();
  GridRequest request;
  request.use_cases = published::UseCases();
  request.far_settings = FarSettings(schema);
  request.p_fr = p_fr;
  request.n = n;
  request.mode = FpirMode::kApproximate;
  request.reference =
      GridReference{published::kReferenceUseCase, published::kReferenceFar};

  ReproductionReport report;
  report.p_fr = p_fr;
  report.n = n;
  report.grid = CompareUseCases(
      request, AlphaModel::CoefficientWeighted(published::Estimate()), schema);
  const RiskGrid unweighted =
      CompareUseCases(request, AlphaModel::Unweighted(schema), schema);

  for (const auto& printed : published::PrintedGrid()) {
    ReproducedCell cell;
    cell.use_case = printed.use_case;
    cell.far_label = printed.far_label;
    cell.printed = printed.value;
    cell.computed = report.grid.At(printed.use_case, printed.far_label).c_identify;
    cell.unweighted =
        unweighted.At(printed.use_case, printed.far_label).c_identify;
    cell.tolerance = ReproductionTolerance(printed.value);
    cell.match = std::fabs(cell.computed - cell.printed) <= cell.tolerance;
    cell.printed_lower = printed.shaded_lower;
    cell.computed_lower =
        report.grid.FlaggedAt(printed.use_case, printed.far_label);
    report.cells.push_back(cell);
  }

  for (const auto& uc : report.grid.use_cases) {
    ColumnVerdict v;
    v.use_case = uc;
    bool unweighted_all = true;
    for (const auto& c : report.cells) {
      if (c.use_case != uc) continue;
      ++v.total;
      if (c.match) ++v.matched;
      unweighted_all = unweighted_all && std::fabs(c.unweighted - c.printed) <=
                                             c.tolerance;
    }
    v.reproducible = v.matched == v.total;
    if (v.reproducible) {
      v.note = "all cells reproduced";
    } else if (v.matched + 1 == v.total) {
      v.note = "isolated deviation from the printed value";
    } else {
      v.note = fmt::format(
          "NON-REPRODUCIBLE from the listed configuration ({} of {} cells "
          "match; unit-weight alpha {}); reported, not fitted",
          v.matched, v.total, unweighted_all ? "matches" : "does not match");
    }
    report.columns.push_back(v);
  }
  return report;
}

std::string FormatReproductionReport(const ReproductionReport& report) {
  std::string out = fmt::format(
      "C_identify reproduction (FRR={}, N={}, approximate FPIR, "
      "coefficient-weighted alpha)\n\n",
      report.p_fr, report.n);
  out += FormatGrid(report.grid);
  out += "\n";
  out += fmt::format("{:<12} {:<6} {:>10} {:>10} {:>10} {:>9}  {:<9} {}\n",
                     "use case", "FAR", "printed", "computed", "unweighted",
                     "tol", "status", "lower-than-ref (printed/computed)");
  for (const auto& c : report.cells) {
    out += fmt::format(
        "{:<12} {:<6} {:>10.4g} {:>10.4g} {:>10.4g} {:>9.2g}  {:<9} {}/{}\n",
        c.use_case, c.far_label, c.printed, c.computed, c.unweighted,
        c.tolerance, c.match ? "match" : "DEVIATION",
        c.printed_lower ? "yes" : "no", c.computed_lower ? "yes" : "no");
  }
  out += "\n";
  for (const auto& v : report.columns) {
    out += fmt::format("{:<12} {}/{} cells within tolerance: {}\n", v.use_case,
                       v.matched, v.total, v.note);
  }
  return out;
}

nlohmann::json ReproductionToJson(const ReproductionReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"use_case", c.use_case},
                     {"far", c.far_label},
                     {"printed", c.printed},
                     {"computed", c.computed},
                     {"unweighted", c.unweighted},
                     {"tolerance", c.tolerance},
                     {"status", c.match ? "match" : "deviation"},
                     {"printed_lower", c.printed_lower},
                     {"computed_lower", c.computed_lower}});
  }
  nlohmann::json columns = nlohmann::json::array();
  for (const auto& v : report.columns) {
    columns.push_back({{"use_case", v.use_case},
                       {"matched", v.matched},
                       {"total", v.total},
                       {"reproducible", v.reproducible},
                       {"note", v.note}});
  }
  return {{"p_fr", report.p_fr},
          {"n", report.n},
          {"grid", GridToJson(report.grid)},
          {"cells", cells},
          {"columns", columns}};
}

}  // namespace cjrisk
