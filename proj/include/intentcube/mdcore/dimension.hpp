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

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace intentcube {

// A member is identified by its level within the dimension and its position
// in that level's ordered domain. Member strings may repeat across levels
// ("Private" at L0 and at L1); identity is always level-qualified.
struct Member {
  int level = 0;
  int ordinal = 0;

  auto operator<=>(const Member&) const = default;
};

class Level {
 public:
  Level(std::string name, std::vector<std::string> members);

  const std::string& name() const { return name_; }
  std::size_t size() const { return members_.size(); }
  const std::string& member(int ordinal) const { return members_.at(static_cast<std::size_t>(ordinal)); }
  std::span<const std::string> members() const { return members_; }
  std::optional<int> find(std::string_view value) const;

  // Numeric level properties, one value per member.
  const std::vector<double>* property(std::string_view name) const;
  std::vector<std::string> property_names() const;
  void set_property(std::string name, std::vector<double> values);

 private:
  std::string name_;
  std::vector<std::string> members_;
  std::unordered_map<std::string, int> index_;
  std::map<std::string, std::vector<double>, std::less<>> properties_;
};

// One ingestion table per dimension path. Columns are level names ordered
// from the most detailed to the coarsest; a column named `Level:prop` carries
// a numeric property of that level's members.
struct HierarchyTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// A lattice of levels with total ancestor maps between comparable levels.
// Immutable once built; safe to share between threads.
class Dimension {
 public:
  static constexpr std::string_view kAllLevel = "ALL";
  static constexpr std::string_view kAllMember = "all";

  const std::string& name() const { return name_; }
  std::size_t level_count() const { return levels_.size(); }
  const Level& level(int index) const { return levels_.at(static_cast<std::size_t>(index)); }
  std::optional<int> find_level(std::string_view name) const;
  // Throws PlanError when the level does not exist.
  int level_index(std::string_view name) const;

  int bottom() const { return 0; }
  int top() const { return static_cast<int>(levels_.size()) - 1; }

  // Reflexive partial order: lower ≼ upper.
  bool precedes(int lower, int upper) const;

  int anc(int from, int to, int ordinal) const;
  std::string anc(std::string_view from, std::string_view to, std::string_view value) const;
  Member anc(Member m, int to) const { return {to, anc(m.level, to, m.ordinal)}; }

  // Members of level `to` whose ancestor at `from` is `ordinal`; requires to ≼ from.
  const std::vector<int>& desc(int from, int to, int ordinal) const;
  std::vector<std::string> desc(std::string_view from, std::string_view to, std::string_view value) const;

  const std::string& value(Member m) const { return level(m.level).member(m.ordinal); }
  Member member(int level, std::string_view value) const;
  std::string qualified(int level) const { return name_ + "." + levels_.at(static_cast<std::size_t>(level)).name(); }

  // Copy of this dimension with extra members appended to `level`. New
  // members inherit the ancestors of the level's last member.
  std::shared_ptr<const Dimension> with_appended_members(int level, const std::vector<std::string>& values) const;

  // Non-fatal observations from ingestion (e.g. non-monotone ancestor maps).
  const std::vector<std::string>& warnings() const { return warnings_; }

  friend std::shared_ptr<const Dimension> load_dimension(std::string name, std::span<const HierarchyTable> paths);

 private:
  Dimension() = default;
  void build_inverse();
  void check_monotone();

  std::string name_;
  std::vector<Level> levels_;
  std::vector<std::vector<bool>> order_;
  std::map<std::pair<int, int>, std::vector<int>> anc_;
  std::map<std::pair<int, int>, std::vector<std::vector<int>>> desc_;
  std::vector<std::string> warnings_;
};

std::shared_ptr<const Dimension> load_dimension(std::string name, std::span<const HierarchyTable> paths);

}  // namespace intentcube
