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

#include "intentcube/mdcore/cube.hpp"

#include <algorithm>
#include <set>

#include "intentcube/error.hpp"

namespace intentcube {

namespace {

bool coords_less(const Cell& a, const Cell& b) { return a.coords < b.coords; }

}  // namespace

Cube::Cube(std::string name, std::vector<Axis> axes, std::vector<std::string> measures, std::vector<Cell> cells, bool mixed)
    : name_(std::move(name)), axes_(std::move(axes)), measures_(std::move(measures)), cells_(std::move(cells)), mixed_(mixed) {
  std::set<std::string> dims;
  for (const auto& a : axes_) {
    if (!a.dimension) throw Error("cube " + name_ + ": axis without dimension");
    if (!dims.insert(a.dimension->name()).second) {
      throw Error("cube " + name_ + ": dimension " + a.dimension->name() + " appears twice");
    }
  }
  std::set<std::string> ms;
  for (const auto& m : measures_) {
    if (!ms.insert(m).second) throw Error("cube " + name_ + ": measure " + m + " appears twice");
  }
  for (const auto& c : cells_) {
    if (c.coords.size() != axes_.size()) throw Error("cube " + name_ + ": cell arity does not match schema");
    if (c.measures.size() != measures_.size()) throw Error("cube " + name_ + ": cell measure count does not match schema");
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      const auto& m = c.coords[a];
      const auto& dim = *axes_[a].dimension;
      if (m.level < 0 || static_cast<std::size_t>(m.level) >= dim.level_count() ||
          (!mixed_ && m.level != axes_[a].level)) {
        throw Error("cube " + name_ + ": coordinate outside the level of axis " + axes_[a].qualified());
      }
      if (m.ordinal < 0 || static_cast<std::size_t>(m.ordinal) >= dim.level(m.level).size()) {
        throw Error("cube " + name_ + ": unknown member in " + dim.qualified(m.level));
      }
    }
  }
  std::sort(cells_.begin(), cells_.end(), coords_less);
  for (std::size_t i = 1; i < cells_.size(); ++i) {
    if (cells_[i].coords == cells_[i - 1].coords) {
      std::string key;
      for (std::size_t a = 0; a < axes_.size(); ++a) key += (a ? ", " : "") + label(i, a);
      throw Error("cube " + name_ + ": duplicate coordinates (" + key + ")");
    }
  }
}

int Cube::axis_of(std::string_view dimension) const {
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    if (axes_[a].dimension->name() == dimension) return static_cast<int>(a);
  }
  return -1;
}

std::optional<int> Cube::find_measure(std::string_view name) const {
  for (std::size_t i = 0; i < measures_.size(); ++i) {
    if (measures_[i] == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

int Cube::measure_index(std::string_view name) const {
  if (auto i = find_measure(name)) return *i;
  throw PlanError("cube " + name_ + " has no measure " + std::string(name));
}

std::vector<double> Cube::column(std::string_view measure) const {
  const auto m = static_cast<std::size_t>(measure_index(measure));
  std::vector<double> out;
  out.reserve(cells_.size());
  for (const auto& c : cells_) out.push_back(c.measures[m]);
  return out;
}

std::optional<std::size_t> Cube::find(const std::vector<Member>& coords) const {
  Cell probe{coords, {}};
  auto it = std::lower_bound(cells_.begin(), cells_.end(), probe, coords_less);
  if (it == cells_.end() || it->coords != coords) return std::nullopt;
  return static_cast<std::size_t>(it - cells_.begin());
}

Member Cube::coordinate(std::size_t i, const Dimension& dimension) const {
  const int a = axis_of(dimension.name());
  if (a < 0) return {dimension.top(), 0};
  return cells_.at(i).coords[static_cast<std::size_t>(a)];
}

std::string Cube::label(std::size_t i, std::size_t axis) const {
  return axes_.at(axis).dimension->value(cells_.at(i).coords.at(axis));
}

bool Cube::detailed() const {
  if (mixed_) return false;
  return std::all_of(axes_.begin(), axes_.end(), [](const Axis& a) { return a.level == a.dimension->bottom(); });
}

Cube Cube::renamed(std::string name) const {
  Cube copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

Cube Cube::subset(const std::vector<std::size_t>& indices, std::string name) const {
  std::vector<Cell> kept;
  kept.reserve(indices.size());
  for (auto i : indices) kept.push_back(cells_.at(i));
  return Cube(name.empty() ? name_ : std::move(name), axes_, measures_, std::move(kept), mixed_);
}

}  // namespace intentcube
