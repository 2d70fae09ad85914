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
#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "intentcube/mdcore/cube.hpp"

namespace intentcube {

enum class ComponentKind { Numeric, Boolean, Label };

// One element per cell of the model's cube, in the cube's canonical order.
struct ModelComponent {
  std::string name;
  ComponentKind kind = ComponentKind::Numeric;
  std::vector<double> values;
  std::vector<std::string> labels;
  // Label components: the core is every element equal to this label.
  std::string focal_label;
  // Components sharing a family are antagonists; partitioning families sum
  // to 1 on every cell.
  std::string family;
  bool partition = false;
  // Competes for the highlight.
  bool candidate = false;
  std::map<std::string, double> characterization;

  std::size_t size() const { return kind == ComponentKind::Label ? labels.size() : values.size(); }
  bool is_core(std::size_t i) const;
  std::vector<std::size_t> core_cells() const;
  std::string core_predicate() const;

  static ModelComponent numeric(std::string name, std::vector<double> values);
  static ModelComponent bitmap(std::string name, std::vector<double> bits, std::string family, bool partition = true);
  static ModelComponent label(std::string name, std::vector<std::string> labels, std::string focal = {});
};

struct Model {
  std::string type;
  std::string measure;
  std::vector<std::pair<std::string, std::string>> binding;
  std::shared_ptr<const Cube> cube;
  std::vector<ModelComponent> components;
  std::map<std::string, double> characterization;
  std::vector<std::string> warnings;

  const ModelComponent* find(std::string_view name) const;
  const ModelComponent& component(std::string_view name) const;
  // Throws when a component breaks the bijection with the cube's cells or a
  // partitioning family does not sum to one.
  void validate() const;
};

struct ModelRequest {
  std::shared_ptr<const Cube> cube;
  std::string measure;
  std::vector<std::string> args;
  std::map<std::string, std::string> params;
  // Second cube for models that compare two cubes.
  std::shared_ptr<const Cube> reference;
  std::uint64_t seed = 42;

  double number(std::string_view key, double fallback) const;
  int integer(std::string_view key, int fallback) const;
  std::string text(std::string_view key, std::string fallback) const;
};

struct ModelType {
  std::string name;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  bool needs_reference = false;
  std::function<Model(const ModelRequest&)> compute;
};

class ModelRegistry {
 public:
  void add(ModelType type);
  const ModelType* find(std::string_view name) const;
  // Throws PlanError for an unknown type.
  const ModelType& get(std::string_view name) const;
  std::vector<std::string> names() const;

  // topk, outliers, kmeans, kpi, variance_test, ts_decompose, ar_predict,
  // correlation, regression, benchmark.
  static ModelRegistry with_defaults();

  ModelRegistry() = default;
  ModelRegistry(const ModelRegistry& other);
  ModelRegistry& operator=(const ModelRegistry&) = delete;

 private:
  mutable std::shared_mutex mu_;
  std::vector<std::shared_ptr<const ModelType>> types_;
};

}  // namespace intentcube
