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

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "intentcube/mdcore/cube.hpp"

namespace intentcube {

// What a function parameter is bound to.
struct BoundInput {
  enum class Kind { Measure, Level, Property, Constant };

  Kind kind = Kind::Constant;
  // Measure name, dimension name (Level: member ordinal on that axis), or
  // property name (looked up on the levels of the cell's coordinates).
  std::string name;
  double constant = 0;

  static BoundInput measure(std::string n) { return {Kind::Measure, std::move(n), 0}; }
  static BoundInput level(std::string dim) { return {Kind::Level, std::move(dim), 0}; }
  static BoundInput property(std::string p) { return {Kind::Property, std::move(p), 0}; }
  static BoundInput value(double v) { return {Kind::Constant, {}, v}; }
};

enum class Scope { Cell, Subcube, Cube };

// A function over one equivalence class of cells. `inputs[p][r]` is the value
// of parameter p on the r-th cell of the class; the result has one column per
// output, each with one value per cell of the class.
struct DerivedFunction {
  std::string name;
  std::vector<std::string> params;
  std::vector<std::string> outputs;
  std::function<std::vector<std::vector<double>>(const std::vector<std::vector<double>>& inputs)> compute;
};

struct FunctionBinding {
  std::map<std::string, BoundInput> inputs;
  Scope scope = Scope::Cell;
  // For Scope::Subcube: cells agreeing on these dimensions share a class.
  std::vector<std::string> key_dimensions;
};

// Resolves one bound input on every cell of the cube.
std::vector<double> bound_column(const Cube& cube, const BoundInput& in);

// Appends the function's outputs as measures. Cell count and existing measure
// values are unchanged.
Cube extend_cube(const Cube& cube, const DerivedFunction& f, const FunctionBinding& binding);

// Indices of cells grouped into equivalence classes, classes in order of their
// first cell.
std::vector<std::vector<std::size_t>> equivalence_classes(const Cube& cube, Scope scope,
                                                          const std::vector<std::string>& key_dimensions);

}  // namespace intentcube
