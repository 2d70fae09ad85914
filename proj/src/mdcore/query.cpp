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

#include "intentcube/mdcore/query.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "intentcube/error.hpp"

namespace intentcube {

const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
    case CmpOp::Eq: return "=";
    case CmpOp::Le: return "<=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Ne: return "<>";
  }
  return "?";
}

const char* to_string(AggFn fn) {
  switch (fn) {
    case AggFn::Sum: return "sum";
    case AggFn::Min: return "min";
    case AggFn::Max: return "max";
    case AggFn::Count: return "count";
    case AggFn::Avg: return "avg";
  }
  return "?";
}

Condition Condition::both(Condition a, Condition b) {
  Condition c;
  c.kind = Kind::And;
  c.children.push_back(std::move(a));
  c.children.push_back(std::move(b));
  return c;
}

Condition Condition::either(Condition a, Condition b) {
  Condition c;
  c.kind = Kind::Or;
  c.children.push_back(std::move(a));
  c.children.push_back(std::move(b));
  return c;
}

Condition Condition::negate(Condition a) {
  Condition c;
  c.kind = Kind::Not;
  c.children.push_back(std::move(a));
  return c;
}

namespace {

struct Compiled {
  Condition::Kind kind = Condition::Kind::True;
  std::size_t axis = 0;
  int level = 0;
  int constant = 0;
  CmpOp op = CmpOp::Eq;
  std::vector<Compiled> children;
};

Compiled compile(const Cube& cube, const Condition& cond) {
  Compiled out;
  out.kind = cond.kind;
  if (cond.kind == Condition::Kind::Atom) {
    const int a = cube.axis_of(cond.ref.dimension);
    if (a < 0) throw PlanError("cube " + cube.name() + " has no dimension " + cond.ref.dimension);
    const auto& axis = cube.axes()[static_cast<std::size_t>(a)];
    const Dimension& dim = *axis.dimension;
    out.axis = static_cast<std::size_t>(a);
    out.level = dim.level_index(cond.ref.level);
    if (!cube.mixed() && !dim.precedes(axis.level, out.level)) {
      throw PlanError("condition on " + cond.ref.str() + " is finer than the cube level " + axis.qualified());
    }
    auto ord = dim.level(out.level).find(cond.value);
    if (!ord) throw PlanError("unknown member '" + cond.value + "' in " + cond.ref.str());
    out.constant = *ord;
    out.op = cond.op;
    return out;
  }
  for (const auto& c : cond.children) out.children.push_back(compile(cube, c));
  return out;
}

bool compare(int lhs, CmpOp op, int rhs) {
  switch (op) {
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Gt: return lhs > rhs;
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Ge: return lhs >= rhs;
    case CmpOp::Ne: return lhs != rhs;
  }
  return false;
}

bool eval(const Cube& cube, const Compiled& c, const Cell& cell) {
  switch (c.kind) {
    case Condition::Kind::True: return true;
    case Condition::Kind::False: return false;
    case Condition::Kind::And: return eval(cube, c.children[0], cell) && eval(cube, c.children[1], cell);
    case Condition::Kind::Or: return eval(cube, c.children[0], cell) || eval(cube, c.children[1], cell);
    case Condition::Kind::Not: return !eval(cube, c.children[0], cell);
    case Condition::Kind::Atom: {
      const Member& m = cell.coords[c.axis];
      const Dimension& dim = *cube.axes()[c.axis].dimension;
      // In a mixed cube a cell finer than or incomparable to the atom level cannot satisfy it.
      if (!dim.precedes(m.level, c.level)) return false;
      return compare(dim.anc(m.level, c.level, m.ordinal), c.op, c.constant);
    }
  }
  return false;
}

}  // namespace

std::vector<std::size_t> select_cells(const Cube& cube, const Condition& cond) {
  const Compiled compiled = compile(cube, cond);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < cube.size(); ++i) {
    if (eval(cube, compiled, cube.cell(i))) kept.push_back(i);
  }
  return kept;
}

Cube eval_selection(const Cube& cube, const Condition& cond) { return cube.subset(select_cells(cube, cond)); }

std::vector<std::string> aggregate_names(const std::vector<Aggregate>& aggs) {
  std::map<std::string, int> uses;
  for (const auto& a : aggs) ++uses[a.measure];
  std::vector<std::string> names;
  std::set<std::string> seen;
  for (const auto& a : aggs) {
    std::string n = uses[a.measure] == 1 ? a.measure : std::string(to_string(a.fn)) + "_" + a.measure;
    if (!seen.insert(n).second) throw PlanError("aggregate " + n + " is listed twice");
    names.push_back(std::move(n));
  }
  return names;
}

Cube eval_cube_query(const Cube& base, const CubeQuery& q, std::string result_name) {
  if (base.mixed()) throw PlanError("cannot query mixed-level cube " + base.name());
  if (q.aggs.empty()) throw PlanError("query on " + base.name() + " has no aggregate");

  struct GroupAxis {
    std::size_t base_axis;
    int level;
  };
  std::vector<GroupAxis> grouping;
  std::vector<Axis> out_axes;
  std::set<std::string> grouped;
  for (const auto& ref : q.group) {
    const int a = base.axis_of(ref.dimension);
    if (a < 0) throw PlanError("cube " + base.name() + " has no dimension " + ref.dimension);
    if (!grouped.insert(ref.dimension).second) throw PlanError("dimension " + ref.dimension + " grouped twice");
    const auto& axis = base.axes()[static_cast<std::size_t>(a)];
    const int lvl = axis.dimension->level_index(ref.level);
    if (!axis.dimension->precedes(axis.level, lvl)) {
      throw PlanError("grouping level " + ref.str() + " is finer than " + axis.qualified());
    }
    if (lvl == axis.dimension->top()) continue;
    grouping.push_back({static_cast<std::size_t>(a), lvl});
    out_axes.push_back({axis.dimension, lvl});
  }

  std::vector<std::size_t> measure_cols;
  for (const auto& agg : q.aggs) measure_cols.push_back(static_cast<std::size_t>(base.measure_index(agg.measure)));
  auto names = aggregate_names(q.aggs);

  struct Acc {
    double sum = 0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    std::size_t count = 0;
  };
  std::map<std::vector<Member>, std::vector<Acc>> groups;
  for (auto i : select_cells(base, q.where)) {
    const Cell& cell = base.cell(i);
    std::vector<Member> key;
    key.reserve(grouping.size());
    for (const auto& g : grouping) {
      const auto& dim = *base.axes()[g.base_axis].dimension;
      key.push_back(dim.anc(cell.coords[g.base_axis], g.level));
    }
    auto& accs = groups[key];
    if (accs.empty()) accs.resize(q.aggs.size());
    for (std::size_t k = 0; k < q.aggs.size(); ++k) {
      const double v = cell.measures[measure_cols[k]];
      auto& acc = accs[k];
      acc.sum += v;
      acc.min = std::min(acc.min, v);
      acc.max = std::max(acc.max, v);
      ++acc.count;
    }
  }

  std::vector<Cell> cells;
  cells.reserve(groups.size());
  for (auto& [key, accs] : groups) {
    Cell c{key, {}};
    for (std::size_t k = 0; k < q.aggs.size(); ++k) {
      const auto& acc = accs[k];
      switch (q.aggs[k].fn) {
        case AggFn::Sum: c.measures.push_back(acc.sum); break;
        case AggFn::Min: c.measures.push_back(acc.min); break;
        case AggFn::Max: c.measures.push_back(acc.max); break;
        case AggFn::Count: c.measures.push_back(static_cast<double>(acc.count)); break;
        case AggFn::Avg: c.measures.push_back(acc.sum / static_cast<double>(acc.count)); break;
      }
    }
    cells.push_back(std::move(c));
  }
  return Cube(std::move(result_name), std::move(out_axes), std::move(names), std::move(cells));
}

}  // namespace intentcube
