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

#include "intentcube/mdcore/dimension.hpp"

#include <algorithm>
#include <set>

#include "intentcube/error.hpp"

namespace intentcube {

Level::Level(std::string name, std::vector<std::string> members) : name_(std::move(name)), members_(std::move(members)) {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    auto [it, inserted] = index_.emplace(members_[i], static_cast<int>(i));
    if (!inserted) {
      throw Error("duplicate member '" + members_[i] + "' in level " + name_);
    }
  }
}

std::optional<int> Level::find(std::string_view value) const {
  auto it = index_.find(std::string(value));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<double>* Level::property(std::string_view name) const {
  auto it = properties_.find(name);
  return it == properties_.end() ? nullptr : &it->second;
}

std::vector<std::string> Level::property_names() const {
  std::vector<std::string> names;
  for (const auto& [k, v] : properties_) names.push_back(k);
  return names;
}

void Level::set_property(std::string name, std::vector<double> values) {
  if (values.size() != members_.size()) {
    throw Error("property '" + name + "' of level " + name_ + " is not total");
  }
  properties_[std::move(name)] = std::move(values);
}

std::optional<int> Dimension::find_level(std::string_view name) const {
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i].name() == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

int Dimension::level_index(std::string_view name) const {
  if (auto idx = find_level(name)) return *idx;
  throw PlanError("unknown level " + name_ + "." + std::string(name));
}

bool Dimension::precedes(int lower, int upper) const {
  return order_.at(static_cast<std::size_t>(lower)).at(static_cast<std::size_t>(upper));
}

int Dimension::anc(int from, int to, int ordinal) const {
  if (ordinal < 0 || static_cast<std::size_t>(ordinal) >= level(from).size()) {
    throw Error("unknown member ordinal in " + qualified(from));
  }
  if (from == to) return ordinal;
  auto it = anc_.find({from, to});
  if (it == anc_.end()) {
    throw PlanError("levels " + qualified(from) + " and " + qualified(to) + " are not comparable");
  }
  return it->second[static_cast<std::size_t>(ordinal)];
}

std::string Dimension::anc(std::string_view from, std::string_view to, std::string_view value) const {
  int f = level_index(from);
  int t = level_index(to);
  return level(t).member(anc(f, t, member(f, value).ordinal));
}

const std::vector<int>& Dimension::desc(int from, int to, int ordinal) const {
  auto it = desc_.find({from, to});
  if (it == desc_.end()) {
    throw PlanError("levels " + qualified(to) + " and " + qualified(from) + " are not comparable");
  }
  if (ordinal < 0 || static_cast<std::size_t>(ordinal) >= it->second.size()) {
    throw Error("unknown member ordinal in " + qualified(from));
  }
  return it->second[static_cast<std::size_t>(ordinal)];
}

std::vector<std::string> Dimension::desc(std::string_view from, std::string_view to, std::string_view value) const {
  int f = level_index(from);
  int t = level_index(to);
  std::vector<std::string> out;
  for (int m : desc(f, t, member(f, value).ordinal)) out.push_back(level(t).member(m));
  return out;
}

Member Dimension::member(int lvl, std::string_view value) const {
  if (auto ord = level(lvl).find(value)) return {lvl, *ord};
  throw PlanError("unknown member '" + std::string(value) + "' in " + qualified(lvl));
}

void Dimension::build_inverse() {
  desc_.clear();
  for (std::size_t from = 0; from < levels_.size(); ++from) {
    for (std::size_t to = 0; to < levels_.size(); ++to) {
      if (!order_[to][from]) continue;
      std::vector<std::vector<int>> groups(levels_[from].size());
      for (std::size_t m = 0; m < levels_[to].size(); ++m) {
        int parent = anc(static_cast<int>(to), static_cast<int>(from), static_cast<int>(m));
        groups[static_cast<std::size_t>(parent)].push_back(static_cast<int>(m));
      }
      desc_[{static_cast<int>(from), static_cast<int>(to)}] = std::move(groups);
    }
  }
}

void Dimension::check_monotone() {
  for (const auto& [key, map] : anc_) {
    for (std::size_t i = 1; i < map.size(); ++i) {
      if (map[i] < map[i - 1]) {
        warnings_.push_back("ancestor map " + qualified(key.first) + " -> " + qualified(key.second) +
                            " is not monotone at member '" + levels_[static_cast<std::size_t>(key.first)].member(static_cast<int>(i)) + "'");
        break;
      }
    }
  }
}

std::shared_ptr<const Dimension> Dimension::with_appended_members(int lvl, const std::vector<std::string>& values) const {
  auto copy = std::shared_ptr<Dimension>(new Dimension(*this));
  auto& target = copy->levels_.at(static_cast<std::size_t>(lvl));
  if (target.size() == 0) throw Error("cannot extend empty level " + qualified(lvl));
  std::vector<std::string> members(target.members().begin(), target.members().end());
  const int last = static_cast<int>(members.size()) - 1;
  for (const auto& v : values) members.push_back(v);
  Level extended(target.name(), std::move(members));
  for (const auto& prop : target.property_names()) {
    auto vals = *target.property(prop);
    vals.resize(extended.size(), vals.back());
    extended.set_property(prop, std::move(vals));
  }
  target = std::move(extended);
  for (auto& [key, map] : copy->anc_) {
    if (key.first != lvl) continue;
    const int parent = map[static_cast<std::size_t>(last)];
    map.resize(map.size() + values.size(), parent);
  }
  copy->build_inverse();
  return copy;
}

namespace {

struct PathSpec {
  std::vector<std::size_t> level_cols;
  std::vector<std::string> level_names;
  std::vector<std::pair<std::size_t, std::pair<std::string, std::string>>> property_cols;  // col, (level, prop)
};

PathSpec split_header(const std::string& dim, const HierarchyTable& table) {
  PathSpec spec;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const auto& h = table.header[c];
    auto colon = h.find(':');
    if (colon != std::string::npos) {
      spec.property_cols.push_back({c, {h.substr(0, colon), h.substr(colon + 1)}});
      continue;
    }
    if (h == Dimension::kAllLevel) {
      throw Error("dimension " + dim + ": level ALL is implicit and must not appear in a hierarchy table");
    }
    spec.level_cols.push_back(c);
    spec.level_names.push_back(h);
  }
  if (spec.level_names.empty()) throw Error("dimension " + dim + ": hierarchy table has no level columns");
  return spec;
}

}  // namespace

std::shared_ptr<const Dimension> load_dimension(std::string name, std::span<const HierarchyTable> paths) {
  if (paths.empty()) throw Error("dimension " + name + ": no hierarchy tables");
  std::vector<PathSpec> specs;
  for (const auto& t : paths) specs.push_back(split_header(name, t));

  const std::string bottom_name = specs.front().level_names.front();
  for (const auto& s : specs) {
    if (s.level_names.front() != bottom_name) {
      throw Error("dimension " + name + ": lattice violation, paths start at different bottom levels (" + bottom_name +
                  ", " + s.level_names.front() + ")");
    }
  }

  // Level order: first appearance; every path lists levels detailed -> coarse.
  std::vector<std::string> level_names;
  for (const auto& s : specs) {
    for (const auto& l : s.level_names) {
      if (std::find(level_names.begin(), level_names.end(), l) == level_names.end()) level_names.push_back(l);
    }
  }
  const std::size_t n_named = level_names.size();
  auto index_of = [&](const std::string& l) {
    return static_cast<std::size_t>(std::find(level_names.begin(), level_names.end(), l) - level_names.begin());
  };

  // Bottom members come from the first table in row order; other tables must list the same set.
  std::vector<std::string> bottom_members;
  std::unordered_map<std::string, std::size_t> bottom_index;
  // parent_of[level][bottom member] = parent value at that level
  std::vector<std::vector<std::string>> parent_of(n_named);
  std::vector<std::vector<std::string>> member_order(n_named);
  std::vector<std::set<std::string>> seen(n_named);

  for (std::size_t p = 0; p < paths.size(); ++p) {
    const auto& table = paths[p];
    const auto& spec = specs[p];
    std::set<std::string> bottoms_in_path;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      if (row.size() != table.header.size()) {
        throw Error("dimension " + name + ": row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                    " columns, expected " + std::to_string(table.header.size()));
      }
      const std::string& bottom = row[spec.level_cols.front()];
      if (bottom.empty()) throw Error("dimension " + name + ": empty bottom member at row " + std::to_string(r + 1));
      std::size_t bi;
      if (p == 0) {
        if (bottoms_in_path.count(bottom)) {
          // Same child listed twice: either a plain duplicate or two different parents.
          const std::size_t prev = bottom_index.at(bottom);
          for (std::size_t c = 1; c < spec.level_cols.size(); ++c) {
            const auto li = index_of(spec.level_names[c]);
            if (parent_of[li][prev] != row[spec.level_cols[c]]) {
              throw Error("dimension " + name + ": member '" + bottom + "' has two parents at level " +
                          spec.level_names[c] + " ('" + parent_of[li][prev] + "', '" + row[spec.level_cols[c]] + "')");
            }
          }
          throw Error("dimension " + name + ": duplicate member '" + bottom + "' in level " + bottom_name);
        }
        bi = bottom_members.size();
        bottom_members.push_back(bottom);
        bottom_index.emplace(bottom, bi);
        for (auto& po : parent_of) po.emplace_back();
        if (seen[0].insert(bottom).second) member_order[0].push_back(bottom);
      } else {
        auto it = bottom_index.find(bottom);
        if (it == bottom_index.end()) {
          throw Error("dimension " + name + ": member '" + bottom + "' of path " + std::to_string(p + 1) +
                      " is missing from the first path");
        }
        if (bottoms_in_path.count(bottom)) {
          throw Error("dimension " + name + ": duplicate member '" + bottom + "' in level " + bottom_name);
        }
        bi = it->second;
      }
      bottoms_in_path.insert(bottom);

      for (std::size_t c = 1; c < spec.level_cols.size(); ++c) {
        const auto li = index_of(spec.level_names[c]);
        const std::string& parent = row[spec.level_cols[c]];
        if (parent.empty()) {
          throw Error("dimension " + name + ": dangling parent for member '" + bottom + "' at level " + spec.level_names[c]);
        }
        auto& slot = parent_of[li][bi];
        if (!slot.empty() && slot != parent) {
          throw Error("dimension " + name + ": member '" + bottom + "' has two parents at level " + spec.level_names[c] +
                      " ('" + slot + "', '" + parent + "')");
        }
        slot = parent;
        if (seen[li].insert(parent).second) member_order[li].push_back(parent);
      }
    }
    if (p > 0 && bottoms_in_path.size() != bottom_members.size()) {
      throw Error("dimension " + name + ": path " + std::to_string(p + 1) + " does not cover every " + bottom_name + " member");
    }
  }

  auto dim = std::shared_ptr<Dimension>(new Dimension());
  dim->name_ = std::move(name);
  for (std::size_t li = 0; li < n_named; ++li) dim->levels_.emplace_back(level_names[li], member_order[li]);
  dim->levels_.emplace_back(std::string(Dimension::kAllLevel), std::vector<std::string>{std::string(Dimension::kAllMember)});
  const std::size_t n = dim->levels_.size();
  const std::size_t all = n - 1;

  // Direct edges from each path, then transitive closure.
  dim->order_.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    dim->order_[i][i] = true;
    dim->order_[i][all] = true;
  }
  for (const auto& s : specs) {
    for (std::size_t a = 0; a < s.level_names.size(); ++a) {
      for (std::size_t b = a + 1; b < s.level_names.size(); ++b) {
        dim->order_[index_of(s.level_names[a])][index_of(s.level_names[b])] = true;
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (dim->order_[i][k] && dim->order_[k][j]) dim->order_[i][j] = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && dim->order_[i][j] && dim->order_[j][i]) {
        throw Error("dimension " + dim->name_ + ": lattice violation, cycle between " + dim->levels_[i].name() + " and " +
                    dim->levels_[j].name());
      }
    }
  }

  // Bottom -> level maps straight from the table columns.
  std::vector<std::vector<int>> from_bottom(n);
  for (std::size_t li = 0; li < n; ++li) {
    auto& map = from_bottom[li];
    map.resize(bottom_members.size());
    for (std::size_t b = 0; b < bottom_members.size(); ++b) {
      if (li == 0) {
        map[b] = *dim->levels_[0].find(bottom_members[b]);
      } else if (li == all) {
        map[b] = 0;
      } else {
        const auto& parent = parent_of[li][b];
        if (parent.empty()) {
          throw Error("dimension " + dim->name_ + ": member '" + bottom_members[b] + "' has no ancestor at level " +
                      dim->levels_[li].name());
        }
        map[b] = *dim->levels_[li].find(parent);
      }
    }
  }

  // Every other comparable pair is induced through the bottom level and must be functional.
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || !dim->order_[a][b]) continue;
      std::vector<int> map(dim->levels_[a].size(), -1);
      for (std::size_t x = 0; x < bottom_members.size(); ++x) {
        const int ma = from_bottom[a][x];
        const int mb = from_bottom[b][x];
        auto& slot = map[static_cast<std::size_t>(ma)];
        if (slot >= 0 && slot != mb) {
          throw Error("dimension " + dim->name_ + ": lattice violation, member '" + dim->levels_[a].member(ma) +
                      "' of level " + dim->levels_[a].name() + " rolls up to both '" + dim->levels_[b].member(slot) +
                      "' and '" + dim->levels_[b].member(mb) + "' at level " + dim->levels_[b].name());
        }
        slot = mb;
      }
      dim->anc_[{static_cast<int>(a), static_cast<int>(b)}] = std::move(map);
    }
  }

  // Level properties.
  for (std::size_t p = 0; p < paths.size(); ++p) {
    for (const auto& [col, lp] : specs[p].property_cols) {
      const auto& [lname, prop] = lp;
      auto li = dim->find_level(lname);
      if (!li) throw Error("dimension " + dim->name_ + ": property column for unknown level " + lname);
      auto& lvl = dim->levels_[static_cast<std::size_t>(*li)];
      std::vector<double> values(lvl.size(), 0.0);
      std::vector<bool> set(lvl.size(), false);
      const auto level_col = std::find(specs[p].level_names.begin(), specs[p].level_names.end(), lname);
      if (level_col == specs[p].level_names.end()) {
        throw Error("dimension " + dim->name_ + ": property " + prop + " given in a path without level " + lname);
      }
      const auto lc = specs[p].level_cols[static_cast<std::size_t>(level_col - specs[p].level_names.begin())];
      for (const auto& row : paths[p].rows) {
        const int m = *lvl.find(row[lc]);
        double v = 0;
        try {
          std::size_t used = 0;
          v = std::stod(row[col], &used);
          if (used != row[col].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
          throw Error("dimension " + dim->name_ + ": property " + prop + " value '" + row[col] + "' is not numeric");
        }
        if (set[static_cast<std::size_t>(m)] && values[static_cast<std::size_t>(m)] != v) {
          throw Error("dimension " + dim->name_ + ": property " + prop + " is not a function of " + lname);
        }
        values[static_cast<std::size_t>(m)] = v;
        set[static_cast<std::size_t>(m)] = true;
      }
      lvl.set_property(prop, std::move(values));
    }
  }

  dim->build_inverse();
  dim->check_monotone();
  return dim;
}

}  // namespace intentcube
