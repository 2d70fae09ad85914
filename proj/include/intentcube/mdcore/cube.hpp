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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "intentcube/mdcore/dimension.hpp"

namespace intentcube {

struct Axis {
  std::shared_ptr<const Dimension> dimension;
  int level = 0;

  std::string qualified() const { return dimension->qualified(level); }
};

struct Cell {
  std::vector<Member> coords;
  std::vector<double> measures;
};

// An immutable set of cells over one level per dimension. Cells are kept in
// canonical order: lexicographic over (level, ordinal) of each coordinate.
//
// A mixed cube lets a coordinate sit at any level of its axis' dimension; it
// is used for the union of differently grouped cubes.
class Cube {
 public:
  Cube() = default;
  Cube(std::string name, std::vector<Axis> axes, std::vector<std::string> measures, std::vector<Cell> cells,
       bool mixed = false);

  const std::string& name() const { return name_; }
  const std::vector<Axis>& axes() const { return axes_; }
  const std::vector<std::string>& measures() const { return measures_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const Cell& cell(std::size_t i) const { return cells_.at(i); }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  bool mixed() const { return mixed_; }

  // -1 when the dimension is not an axis of this cube.
  int axis_of(std::string_view dimension) const;
  std::optional<int> find_measure(std::string_view name) const;
  // Throws PlanError for an unknown measure.
  int measure_index(std::string_view name) const;
  std::vector<double> column(std::string_view measure) const;

  std::optional<std::size_t> find(const std::vector<Member>& coords) const;
  // Coordinate of cell `i` on dimension `dimension`; the ALL member when the
  // cube has no such axis.
  Member coordinate(std::size_t i, const Dimension& dimension) const;
  std::string label(std::size_t i, std::size_t axis) const;
  bool detailed() const;

  Cube renamed(std::string name) const;
  // Keeps the cells at the given indices (any order), schema unchanged.
  Cube subset(const std::vector<std::size_t>& indices, std::string name = {}) const;

 private:
  std::string name_;
  std::vector<Axis> axes_;
  std::vector<std::string> measures_;
  std::vector<Cell> cells_;
  bool mixed_ = false;
};

}  // namespace intentcube
