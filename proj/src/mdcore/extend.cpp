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

#include "intentcube/mdcore/extend.hpp"

#include <algorithm>
#include <map>

#include "intentcube/error.hpp"

namespace intentcube {

std::vector<double> bound_column(const Cube& cube, const BoundInput& in) {
  std::vector<double> out(cube.size(), in.constant);
  switch (in.kind) {
    case BoundInput::Kind::Constant:
      return out;
    case BoundInput::Kind::Measure:
      return cube.column(in.name);
    case BoundInput::Kind::Level: {
      const int a = cube.axis_of(in.name);
      if (a < 0) throw PlanError("cube " + cube.name() + " has no dimension " + in.name);
      for (std::size_t i = 0; i < cube.size(); ++i) {
        out[i] = cube.cell(i).coords[static_cast<std::size_t>(a)].ordinal;
      }
      return out;
    }
    case BoundInput::Kind::Property: {
      for (std::size_t i = 0; i < cube.size(); ++i) {
        bool found = false;
        for (std::size_t a = 0; a < cube.axes().size() && !found; ++a) {
          const Member& m = cube.cell(i).coords[a];
          if (const auto* values = cube.axes()[a].dimension->level(m.level).property(in.name)) {
            out[i] = (*values)[static_cast<std::size_t>(m.ordinal)];
            found = true;
          }
        }
        if (!found) throw PlanError("no level of cube " + cube.name() + " has property " + in.name);
      }
      return out;
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> equivalence_classes(const Cube& cube, Scope scope,
                                                          const std::vector<std::string>& key_dimensions) {
  std::vector<std::vector<std::size_t>> classes;
  if (scope == Scope::Cell) {
    for (std::size_t i = 0; i < cube.size(); ++i) classes.push_back({i});
    return classes;
  }
  if (scope == Scope::Cube) {
    std::vector<std::size_t> all(cube.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    if (!all.empty()) classes.push_back(std::move(all));
    return classes;
  }
  std::vector<std::size_t> axes;
  for (const auto& d : key_dimensions) {
    const int a = cube.axis_of(d);
    if (a < 0) throw PlanError("cube " + cube.name() + " has no dimension " + d);
    axes.push_back(static_cast<std::size_t>(a));
  }
  std::map<std::vector<Member>, std::size_t> index;
  for (std::size_t i = 0; i < cube.size(); ++i) {
    std::vector<Member> key;
    for (auto a : axes) key.push_back(cube.cell(i).coords[a]);
    auto [it, inserted] = index.emplace(key, classes.size());
    if (inserted) classes.emplace_back();
    classes[it->second].push_back(i);
  }
  return classes;
}

Cube extend_cube(const Cube& cube, const DerivedFunction& f, const FunctionBinding& binding) {
  std::vector<std::vector<double>> columns;
  for (const auto& p : f.params) {
    auto it = binding.inputs.find(p);
    if (it == binding.inputs.end()) throw PlanError("function " + f.name + ": parameter " + p + " is not bound");
    columns.push_back(bound_column(cube, it->second));
  }
  for (const auto& [p, in] : binding.inputs) {
    if (std::find(f.params.begin(), f.params.end(), p) == f.params.end()) {
      throw PlanError("function " + f.name + " has no parameter " + p);
    }
  }
  for (const auto& o : f.outputs) {
    if (cube.find_measure(o)) throw PlanError("cube " + cube.name() + " already has measure " + o);
  }

  std::vector<std::vector<double>> derived(f.outputs.size(), std::vector<double>(cube.size(), 0.0));
  for (const auto& cls : equivalence_classes(cube, binding.scope, binding.key_dimensions)) {
    std::vector<std::vector<double>> inputs(columns.size());
    for (std::size_t p = 0; p < columns.size(); ++p) {
      for (auto i : cls) inputs[p].push_back(columns[p][i]);
    }
    std::vector<std::vector<double>> result;
    try {
      result = f.compute(inputs);
    } catch (const std::exception& e) {
      std::string key;
      const auto& first = cube.cell(cls.front());
      for (std::size_t a = 0; a < cube.axes().size(); ++a) {
        if (binding.scope == Scope::Subcube &&
            std::find(binding.key_dimensions.begin(), binding.key_dimensions.end(),
                      cube.axes()[a].dimension->name()) == binding.key_dimensions.end()) {
          continue;
        }
        if (binding.scope == Scope::Cube) break;
        key += (key.empty() ? "" : ", ") + cube.axes()[a].dimension->value(first.coords[a]);
      }
      throw ExecutionError("function " + f.name + " failed on class (" + key + "): " + e.what());
    }
    if (result.size() != f.outputs.size()) throw ExecutionError("function " + f.name + " returned the wrong number of outputs");
    for (std::size_t o = 0; o < result.size(); ++o) {
      if (result[o].size() != cls.size()) throw ExecutionError("function " + f.name + " returned a column of the wrong length");
      for (std::size_t r = 0; r < cls.size(); ++r) derived[o][cls[r]] = result[o][r];
    }
  }

  std::vector<std::string> measures = cube.measures();
  measures.insert(measures.end(), f.outputs.begin(), f.outputs.end());
  std::vector<Cell> cells = cube.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t o = 0; o < derived.size(); ++o) cells[i].measures.push_back(derived[o][i]);
  }
  return Cube(cube.name(), cube.axes(), std::move(measures), std::move(cells), cube.mixed());
}

}  // namespace intentcube
