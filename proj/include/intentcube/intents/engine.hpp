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
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "intentcube/highlights/highlights.hpp"
#include "intentcube/iql/ast.hpp"
#include "intentcube/mdcore/catalog.hpp"
#include "intentcube/models/algorithms.hpp"
#include "intentcube/models/model.hpp"

namespace intentcube {

struct KpiDefinition {
  std::string name;
  std::vector<KpiRule> rules;
  std::optional<std::string> target;
};

struct Provenance {
  std::string text;
  // describe, assess, explain, predict, suggest or query.
  std::string verb;
  // Data acquisition. Absent when the cube was filtered in place.
  std::optional<CubeQuery> query;
  // Registered cube whose lineage equals `query`; its cells were reused.
  std::string view;
  std::optional<Condition> filter;
  std::string old_cube;
  std::vector<std::string> model_calls;
  // One per highlight.
  std::vector<ScoringPlan> scoring;
};

struct EnhancedCube {
  std::string name;
  std::shared_ptr<const Cube> cube;
  std::vector<Model> models;
  std::vector<Highlight> highlights;
  Provenance provenance;
  std::vector<std::string> warnings;
};

// Session-local cube names. They shadow catalog cubes.
using Bindings = std::map<std::string, Catalog::CubeEntry, std::less<>>;

struct EngineOptions {
  std::uint64_t seed = 42;
  int max_candidates = 16;
};

class Engine {
 public:
  Engine(std::shared_ptr<Catalog> catalog, ModelRegistry models = ModelRegistry::with_defaults(),
         FunctionRegistry functions = FunctionRegistry::with_defaults(), EngineOptions options = {});

  Catalog& catalog() const { return *catalog_; }
  const ModelRegistry& models() const { return models_; }
  const FunctionRegistry& functions() const { return functions_; }
  const EngineOptions& options() const { return options_; }

  void add_kpi(KpiDefinition kpi);
  std::optional<KpiDefinition> find_kpi(std::string_view name) const;
  std::vector<std::string> kpi_names() const;

  // Runs one statement. Results named by an alias are bound in `bindings`.
  // Throws iql::ParseError, PlanError or ExecutionError.
  EnhancedCube execute(const iql::Statement& statement, const std::string& text, Bindings& bindings,
                       std::size_t sequence = 0) const;
  EnhancedCube submit(const std::string& text, Bindings& bindings, std::size_t sequence = 0) const;

 private:
  std::shared_ptr<Catalog> catalog_;
  ModelRegistry models_;
  FunctionRegistry functions_;
  EngineOptions options_;
  mutable std::shared_mutex mu_;
  std::map<std::string, KpiDefinition, std::less<>> kpis_;
};

// Reads ENGINE_SEED, 42 when unset or malformed.
std::uint64_t seed_from_environment();

}  // namespace intentcube
