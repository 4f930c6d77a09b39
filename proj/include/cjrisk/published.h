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

// Fixtures from the published small-store study: the nine-card design, its
// question order, the fitted utilities, the three reference deployments and
// the C_identify grid reported for them (FRR = 1e-2, N = 10000).

#ifndef CJRISK_PUBLISHED_H_
#define CJRISK_PUBLISHED_H_

#include <string>
#include <vector>

#include "cjrisk/design.h"
#include "cjrisk/estimate.h"
#include "cjrisk/risk.h"
#include "cjrisk/schema.h"

namespace cjrisk::published {

// Nine cards over DefaultSchema(), numbered 1..9.
FractionalDesign Design();
// Nine questions: (1,5) (9,7) (8,1) (5,4) (6,2) (7,8) (4,3) (3,6) (2,9).
PairingPlan Plan();
// Conditional-logit fit as printed (p-values reported as "<2e-16" are stored
// as 2e-16). Not reproducible without the raw responses.
UtilityEstimate Estimate();
TrueUtility Utility();

// Low-secure: no measures. Mid-secure: staff, friendship, normal congestion.
// High-secure: every measure at its strongest.
std::vector<UseCase> UseCases();

struct GridCell {
  std::string use_case;
  std::string far_label;
  double value = 0.0;
  bool shaded_lower = false;  // printed as below the reference cell
};
// Printed C_identify values, FAR-major.
std::vector<GridCell> PrintedGrid();

inline constexpr double kFrr = 1e-2;
inline constexpr std::size_t kGallerySize = 10000;
inline constexpr const char* kReferenceUseCase = "Low-secure";
inline constexpr const char* kReferenceFar = "10^-4";

}  // namespace cjrisk::published

#endif  // CJRISK_PUBLISHED_H_
