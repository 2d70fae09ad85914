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

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "intentcube/models/model.hpp"

namespace intentcube {

using CubePtr = std::shared_ptr<const Cube>;

// Rank (1 = largest), Top-k, Non-top-k. Ties rank in canonical cell order.
Model topk(CubePtr cube, const std::string& measure, int k);

// Outlierness (signed sample z-score), Outliers (|z| > threshold), Non-outliers.
Model outliers(CubePtr cube, const std::string& measure, double threshold = 2.0);

// Lloyd's algorithm with seeded farthest-point initialization.
// Cluster_1..Cluster_k partition the cells; Representative marks medoids.
Model kmeans(CubePtr cube, const std::vector<std::string>& measures, int k, std::uint64_t seed);

struct KpiRule {
  double lo = 0;
  double hi = std::numeric_limits<double>::infinity();
  std::string label;
};

// Assessment label per cell from half-open intervals [lo, hi), one bitmap per
// label and Deviation (1 where the label differs from the target label; the
// most frequent label when no target is given).
Model kpi(CubePtr cube, const std::string& measure, std::vector<KpiRule> rules,
          std::optional<std::string> target = std::nullopt);
std::vector<KpiRule> parse_kpi_rules(std::string_view text);

// BenchmarkValue, Discrepancy (measure - benchmark), MC- (<= 0), MC+ (> 0).
// The benchmark cube must cover every cell; extra benchmark axes must be fixed
// to a single member.
Model benchmark_discrepancy(CubePtr cube, const std::string& measure, const Cube& benchmark,
                            const std::string& benchmark_name);
Model benchmark_constant(CubePtr cube, const std::string& measure, double value);

// Over `fresh`: Fstat, Discrepancy (value - mean of fresh), AboveStdev,
// BelowStdev. The variance ratio old/new is in the characterization.
Model variance_test(CubePtr fresh, const Cube& old, const std::string& measure);

// Trend (centered moving average, shrinking at the edges), Seasonality,
// Noise per series along `time_dimension`.
Model ts_decompose(CubePtr cube, const std::string& measure, const std::string& time_dimension, int window = 5,
                   int period = 0);

// Fits AR(p) with intercept on the trend of each series and appends k cells.
// The model is bound to the extended cube: Known, Predicted, Trend.
Model ar_predict(CubePtr cube, const std::string& measure, const std::string& time_dimension, int k, int order = 2,
                 int window = 5);

// Scores each candidate by KL(actual || uniform) and binds the model to the
// mixed union of the scored candidates: Score plus one bitmap per candidate.
Model inform(const std::vector<CubePtr>& candidates, const std::vector<std::string>& descriptions,
             const std::string& measure);
double kl_to_uniform(const std::vector<double>& values);

// Pearson and Kendall tau-b in the characterization; Participation is the
// leave-one-out change of Pearson's coefficient per cell.
Model correlation(CubePtr cube, const std::string& measure, const std::string& attribute, double threshold = 0.05);
double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y);

// OLS of the measure on the attributes: Expected, Discrepancy, Above
// (|residual| > threshold * residual stdev), Below.
Model regression(CubePtr cube, const std::string& measure, const std::vector<std::string>& attributes,
                 double threshold = 1.0);

// A measure of the cube or a numeric level property, per cell.
std::vector<double> attribute_column(const Cube& cube, const std::string& attribute);

}  // namespace intentcube
