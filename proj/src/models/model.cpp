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

#include "intentcube/models/model.hpp"

#include <cmath>
#include <mutex>

#include "intentcube/error.hpp"

namespace intentcube {

bool ModelComponent::is_core(std::size_t i) const {
  switch (kind) {
    case ComponentKind::Boolean: return values.at(i) == 1.0;
    case ComponentKind::Label: return !focal_label.empty() && labels.at(i) == focal_label;
    case ComponentKind::Numeric: return false;
  }
  return false;
}

std::vector<std::size_t> ModelComponent::core_cells() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (is_core(i)) out.push_back(i);
  }
  return out;
}

std::string ModelComponent::core_predicate() const {
  switch (kind) {
    case ComponentKind::Boolean: return "element = 1";
    case ComponentKind::Label: return focal_label.empty() ? "none" : "element = '" + focal_label + "'";
    case ComponentKind::Numeric: return "none";
  }
  return "none";
}

ModelComponent ModelComponent::numeric(std::string name, std::vector<double> values) {
  ModelComponent c;
  c.name = std::move(name);
  c.values = std::move(values);
  return c;
}

ModelComponent ModelComponent::bitmap(std::string name, std::vector<double> bits, std::string family, bool partition) {
  ModelComponent c;
  c.name = std::move(name);
  c.kind = ComponentKind::Boolean;
  c.values = std::move(bits);
  c.family = std::move(family);
  c.partition = partition;
  c.candidate = true;
  return c;
}

ModelComponent ModelComponent::label(std::string name, std::vector<std::string> labels, std::string focal) {
  ModelComponent c;
  c.name = std::move(name);
  c.kind = ComponentKind::Label;
  c.labels = std::move(labels);
  c.focal_label = std::move(focal);
  return c;
}

const ModelComponent* Model::find(std::string_view name) const {
  for (const auto& c : components) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const ModelComponent& Model::component(std::string_view name) const {
  if (const auto* c = find(name)) return *c;
  throw PlanError("model " + type + " has no component " + std::string(name));
}

void Model::validate() const {
  if (!cube) throw ExecutionError("model " + type + " is not bound to a cube");
  std::map<std::string, std::vector<double>> sums;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    for (std::size_t j = 0; j < i; ++j) {
      if (components[j].name == c.name) throw ExecutionError("model " + type + " has two components named " + c.name);
    }
    if (c.size() != cube->size()) {
      throw ExecutionError("component " + c.name + " of model " + type + " has " + std::to_string(c.size()) +
                           " elements for " + std::to_string(cube->size()) + " cells");
    }
    if (c.kind == ComponentKind::Boolean) {
      for (double v : c.values) {
        if (v != 0.0 && v != 1.0) throw ExecutionError("component " + c.name + " is not a bitmap");
      }
    }
    if (c.partition && c.kind == ComponentKind::Boolean) {
      auto& s = sums[c.family];
      s.resize(cube->size(), 0.0);
      for (std::size_t k = 0; k < c.values.size(); ++k) s[k] += c.values[k];
    }
  }
  for (const auto& [family, s] : sums) {
    for (double v : s) {
      if (v != 1.0) throw ExecutionError("family " + family + " of model " + type + " does not partition the cells");
    }
  }
}

double ModelRequest::number(std::string_view key, double fallback) const {
  auto it = params.find(std::string(key));
  if (it == params.end()) return fallback;
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size()) {
    throw PlanError("parameter " + std::string(key) + " expects a number, got '" + it->second + "'");
  }
  return v;
}

int ModelRequest::integer(std::string_view key, int fallback) const {
  const double v = number(key, fallback);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw PlanError("parameter " + std::string(key) + " expects an integer");
  }
  return static_cast<int>(v);
}

std::string ModelRequest::text(std::string_view key, std::string fallback) const {
  auto it = params.find(std::string(key));
  return it == params.end() ? fallback : it->second;
}

ModelRegistry::ModelRegistry(const ModelRegistry& other) {
  std::shared_lock lock(other.mu_);
  types_ = other.types_;
}

void ModelRegistry::add(ModelType type) {
  std::unique_lock lock(mu_);
  for (const auto& t : types_) {
    if (t->name == type.name) throw Error("model type " + type.name + " is already registered");
  }
  if (type.outputs.empty()) throw Error("model type " + type.name + " declares no output component");
  types_.push_back(std::make_shared<const ModelType>(std::move(type)));
}

const ModelType* ModelRegistry::find(std::string_view name) const {
  std::shared_lock lock(mu_);
  for (const auto& t : types_) {
    if (t->name == name) return t.get();
  }
  return nullptr;
}

const ModelType& ModelRegistry::get(std::string_view name) const {
  if (const auto* t = find(name)) return *t;
  throw PlanError("unknown model type " + std::string(name));
}

std::vector<std::string> ModelRegistry::names() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& t : types_) out.push_back(t->name);
  return out;
}

}  // namespace intentcube
