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

#include <string>
#include <vector>

#include "intentcube/mdcore/cube.hpp"

namespace intentcube {

// `dimension.level`, e.g. work_class.L1.
struct LevelRef {
  std::string dimension;
  std::string level;

  std::string str() const { return dimension + "." + level; }
  bool operator==(const LevelRef&) const = default;
};

enum class CmpOp { Lt, Gt, Eq, Le, Ge, Ne };

const char* to_string(CmpOp op);

// Boolean formula over atoms `level op 'member'`. And/Or nodes are binary.
struct Condition {
  enum class Kind { True, False, Atom, And, Or, Not };

  Kind kind = Kind::True;
  LevelRef ref;
  CmpOp op = CmpOp::Eq;
  std::string value;
  std::vector<Condition> children;

  static Condition truth(bool v) { return Condition{v ? Kind::True : Kind::False, {}, CmpOp::Eq, {}, {}}; }
  static Condition atom(LevelRef ref, CmpOp op, std::string value) {
    return Condition{Kind::Atom, std::move(ref), op, std::move(value), {}};
  }
  static Condition both(Condition a, Condition b);
  static Condition either(Condition a, Condition b);
  static Condition negate(Condition a);

  bool is_true() const { return kind == Kind::True; }
  bool operator==(const Condition&) const = default;
};

enum class AggFn { Sum, Min, Max, Count, Avg };

const char* to_string(AggFn fn);

struct Aggregate {
  AggFn fn = AggFn::Sum;
  std::string measure;

  bool operator==(const Aggregate&) const = default;
};

// (source cube, selection, grouping levels, aggregates). Dimensions absent
// from `group` are rolled up to ALL and dropped from the result schema.
struct CubeQuery {
  std::string source;
  Condition where;
  std::vector<LevelRef> group;
  std::vector<Aggregate> aggs;

  bool operator==(const CubeQuery&) const = default;
};

// Cells of `cube` satisfying `cond`. Atoms on levels coarser than the cube's
// are evaluated through anc; finer levels are a PlanError.
Cube eval_selection(const Cube& cube, const Condition& cond);
std::vector<std::size_t> select_cells(const Cube& cube, const Condition& cond);

// Result measure names: the measure itself when it is aggregated once,
// otherwise `fn_measure`.
std::vector<std::string> aggregate_names(const std::vector<Aggregate>& aggs);

Cube eval_cube_query(const Cube& base, const CubeQuery& q, std::string result_name);

}  // namespace intentcube
