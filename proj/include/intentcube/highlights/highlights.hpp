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

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "intentcube/mdcore/proxies.hpp"
#include "intentcube/models/model.hpp"

namespace intentcube {

// A registered function plus its argument, e.g. {"const", "0"} or
// {"component", "BenchmarkValue"}.
struct FunctionRef {
  std::string name;
  std::string arg;

  std::string str() const { return arg.empty() ? name : name + "(" + arg + ")"; }
};

// Per-cell significance of `cube`. `models` are the models bound to the cube,
// if any, for functions that read a component.
using SignificanceFn = std::function<std::vector<double>(const Cube& cube, const std::string& measure,
                                                         const std::vector<Model>& models, const std::string& arg)>;
// Contrasts a new cell's significance with its proxies' (averaged) significance.
using DeltaFn = std::function<double(double fresh, double old)>;
// Aggregates surprises (component level) or component scores (model level).
// `population` is the cell count of the new cube.
using AggregationFn = std::function<double(const std::vector<double>& values, std::size_t population)>;

class FunctionRegistry {
 public:
  void add_significance(std::string name, SignificanceFn f);
  void add_delta(std::string name, DeltaFn f);
  void add_aggregation(std::string name, AggregationFn f);

  // Throw PlanError for unknown names.
  const SignificanceFn& significance(const std::string& name) const;
  const DeltaFn& delta(const std::string& name) const;
  const AggregationFn& aggregation(const std::string& name) const;

  // Significance: zscore, measure, mean, const, component.
  // Delta: abs_diff, diff (new - old), reverse_diff (old - new).
  // Aggregation: mean, sum, max, min, count_complement (population - sum).
  static FunctionRegistry with_defaults();

  FunctionRegistry() = default;
  FunctionRegistry(const FunctionRegistry& other);
  FunctionRegistry& operator=(const FunctionRegistry&) = delete;

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, SignificanceFn> significance_;
  std::map<std::string, DeltaFn> delta_;
  std::map<std::string, AggregationFn> aggregation_;
};

struct ScoringPlan {
  FunctionRef significance_new{"zscore", {}};
  FunctionRef significance_old{"zscore", {}};
  std::string delta = "abs_diff";
  std::string component_aggregation = "mean";
  std::string model_aggregation = "mean";
};

inline constexpr double kNoScore = -std::numeric_limits<double>::infinity();

// Mean of the old significances over each proxy set, contrasted with delta.
std::vector<double> surprise(const std::vector<double>& sig_new, const std::vector<double>& sig_old,
                             const Proxies& proxies, const DeltaFn& delta);

// Aggregation over the surprises of the component's core cells; kNoScore for
// an empty core.
double component_score(const ModelComponent& mc, const std::vector<double>& surprises, const AggregationFn& agg);

struct ComponentScore {
  std::size_t model = 0;
  std::string component;
  double score = kNoScore;
  std::size_t core_size = 0;
};

struct Highlight {
  std::size_t model = 0;
  std::string model_type;
  std::string component;
  std::vector<std::size_t> core_cells;
  double score = kNoScore;
  std::vector<ComponentScore> component_scores;
  // One per model, in model order.
  std::vector<double> model_scores;
  std::vector<double> significance_new;
  std::vector<double> significance_old;
  std::vector<double> surprises;
};

// Runs the selection over every candidate component of `models`, all bound to
// `fresh`. Ties go to the earlier model, then the earlier component. Throws
// ExecutionError("nothing to highlight") when no component is a candidate.
Highlight select_highlight(const std::vector<Model>& models, const ScoringPlan& plan, const Cube& old_cube,
                           const Cube& fresh, const Proxies& proxies, const std::string& measure,
                           const FunctionRegistry& functions);

}  // namespace intentcube
