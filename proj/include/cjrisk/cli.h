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

#ifndef CJRISK_CLI_H_
#define CJRISK_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace cjrisk {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

// Environment variable naming the default bundle directory.
inline constexpr const char* kBundleDirEnv = "CJRISK_DIR";

// Entry point of the `cjrisk` tool. Data goes to `out` (only when a command
// prints a report), diagnostics to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace cjrisk

#endif  // CJRISK_CLI_H_
