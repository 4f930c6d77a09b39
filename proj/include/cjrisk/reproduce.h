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

#ifndef CJRISK_REPRODUCE_H_
#define CJRISK_REPRODUCE_H_

#include <cstddef>
#include <string>
#include <vector>

#include "cjrisk/risk.h"
#include "json.hpp"

namespace cjrisk {

// Absolute tolerance used to call a recomputed cell a match: 2e-5 for printed
// values below 1e-3, 0.002 otherwise.
double ReproductionTolerance(double printed);

struct ReproducedCell {
  std::string use_case;
  std::string far_label;
  double printed = 0.0;
  double computed = 0.0;    // coefficient-weighted alpha
  double unweighted = 0.0;  // sensitivity: unit weights
  double tolerance = 0.0;
  bool match = false;
  bool printed_lower = false;   // shaded below the reference when published
  bool computed_lower = false;  // flagged below the reference here
};

struct ColumnVerdict {
  std::string use_case;
  std::size_t matched = 0;
  std::size_t total = 0;
  bool reproducible = false;
  std::string note;
};

struct ReproductionReport {
  double p_fr = 0.0;
  std::size_t n = 0;
  RiskGrid grid;
  std::vector<ReproducedCell> cells;
  std::vector<ColumnVerdict> columns;
};

// Recomputes the published C_identify grid from the published utilities and
// deployments with the approximate FPIR terms and a (Low-secure, 10^-4)
// reference.
ReproductionReport Reproduce(double p_fr, std::size_t n);

std::string FormatReproductionReport(const ReproductionReport& report);
nlohmann::json ReproductionToJson(const ReproductionReport& report);

}  // namespace cjrisk

#endif  // CJRISK_REPRODUCE_H_
