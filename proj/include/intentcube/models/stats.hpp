/*
 * Copyright (c) intentcube authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

namespace intentcube::stats {

inline double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// ddof = 1 gives the sample variance, ddof = 0 the population variance.
inline double variance(std::span<const double> v, int ddof = 1) {
  const auto n = static_cast<double>(v.size());
  if (n - ddof <= 0) return 0.0;
  const double m = mean(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / (n - ddof);
}

inline double stdev(std::span<const double> v, int ddof = 1) { return std::sqrt(variance(v, ddof)); }

// Signed standard scores; all zero when the spread vanishes.
inline std::vector<double> zscores(std::span<const double> v, int ddof = 1) {
  std::vector<double> out(v.size(), 0.0);
  const double s = stdev(v, ddof);
  if (!(s > 0)) return out;
  const double m = mean(v);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - m) / s;
  return out;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const double mx = mean(x), my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace intentcube::stats
