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

// Reference computations that share no code with the library: plain
// long-double arithmetic, no Eigen, no cjrisk numerics.

#ifndef CJRISK_TESTS_ORACLES_H_
#define CJRISK_TESTS_ORACLES_H_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

namespace oracle {

using Row = std::vector<long double>;

// det(X'X) for rows x (intercept prepended), by Gaussian elimination with
// partial pivoting.
inline long double InformationDeterminant(const std::vector<Row>& rows) {
  const std::size_t p = rows.front().size() + 1;
  std::vector<Row> m(p, Row(p, 0.0L));
  for (const auto& r : rows) {
    Row x(p);
    x[0] = 1.0L;
    std::copy(r.begin(), r.end(), x.begin() + 1);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) m[i][j] += x[i] * x[j];
  }
  long double det = 1.0L;
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < p; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0L) return 0.0L;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < p; ++r) {
      const long double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < p; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

// All k-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> Subsets(std::size_t n,
                                                     std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + k, true);
  do {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask[i]) s.push_back(i);
    out.push_back(s);
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

// Bradley-Terry strengths by Zermelo's fixed-point iteration.
// wins[i][j] = times item i beat item j. Strengths normalized so that
// item `anchor` has strength 1.
inline std::vector<long double> BradleyTerry(
    const std::vector<std::vector<long double>>& wins, std::size_t anchor) {
  const std::size_t m = wins.size();
  std::vector<long double> pi(m, 1.0L);
  for (int it = 0; it < 200000; ++it) {
    std::vector<long double> next(m);
    long double change = 0.0L;
    for (std::size_t i = 0; i < m; ++i) {
      long double w = 0.0L, denom = 0.0L;
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        w += wins[i][j];
        denom += (wins[i][j] + wins[j][i]) / (pi[i] + pi[j]);
      }
      next[i] = denom > 0 ? w / denom : pi[i];
    }
    const long double scale = next[anchor];
    for (std::size_t i = 0; i < m; ++i) {
      next[i] /= scale;
      change = std::max(change, std::fabs(std::log(next[i] / pi[i])));
    }
    pi = next;
    if (change < 1e-17L) break;
  }
  return pi;
}

// Upper normal tail by composite Simpson quadrature of the density on
// [z, z + 40].
inline long double NormalTail(long double z, std::size_t intervals = 200000) {
  const long double a = z, b = z + 40.0L;
  const long double h = (b - a) / intervals;
  const long double c = 1.0L / std::sqrt(2.0L * 3.14159265358979323846264L);
  auto f = [&](long double x) { return c * std::exp(-0.5L * x * x); };
  long double s = f(a) + f(b);
  for (std::size_t i = 1; i < intervals; ++i)
    s += f(a + i * h) * (i % 2 ? 4.0L : 2.0L);
  return s * h / 3.0L;
}

// 1 - (1 - p)^n by direct repeated multiplication.
inline long double AnyOf(long double p, std::size_t n) {
  long double q = 1.0L;
  for (std::size_t i = 0; i < n; ++i) q *= (1.0L - p);
  return 1.0L - q;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto base = std::filesystem::temp_directory_path() /
                    ("cjrisk-" + tag + "-" + std::to_string(::getpid()) + "-" +
                     std::to_string(counter++));
  std::filesystem::remove_all(base);
  std::filesystem::create_directories(base);
  return base;
}

inline double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       since)
      .count();
}

}  // namespace oracle

#endif  // CJRISK_TESTS_ORACLES_H_
