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

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "intentcube/error.hpp"

using namespace intentcube;
using intentcube::testing::fixture_dimension;

namespace {

HierarchyTable table(std::vector<std::string> header, std::vector<std::vector<std::string>> rows) {
  return {std::move(header), std::move(rows)};
}

std::shared_ptr<const Dimension> single(const HierarchyTable& t, const std::string& name = "d") {
  return load_dimension(name, std::span<const HierarchyTable>(&t, 1));
}

}  // namespace

TEST(Dimension, LevelsAndAll) {
  auto edu = fixture_dimension("education");
  ASSERT_EQ(edu->level_count(), 5u);
  EXPECT_EQ(edu->level(edu->top()).name(), "ALL");
  EXPECT_EQ(edu->level(edu->top()).size(), 1u);
  EXPECT_EQ(edu->level(edu->top()).member(0), "all");
  EXPECT_TRUE(edu->precedes(0, 2));
  EXPECT_FALSE(edu->precedes(2, 0));
  EXPECT_TRUE(edu->precedes(1, 1));
}

TEST(Dimension, AncestorMaps) {
  auto edu = fixture_dimension("education");
  EXPECT_EQ(edu->anc("L0", "L2", "Doctorate"), "Post-grad");
  EXPECT_EQ(edu->anc("L0", "L3", "9th"), "Non-post-secondary");
  EXPECT_EQ(edu->anc("L1", "ALL", "Graduate"), "all");
  EXPECT_EQ(edu->anc("L2", "L2", "Assoc"), "Assoc");
  EXPECT_THROW(edu->anc("L2", "L0", "Assoc"), PlanError);
}

TEST(Dimension, Descendants) {
  auto edu = fixture_dimension("education");
  auto d = edu->desc("L2", "L0", "Post-grad");
  EXPECT_EQ(d, (std::vector<std::string>{"Masters", "Doctorate", "Prof-school"}));
  EXPECT_EQ(edu->desc("ALL", "L3", "all").size(), 2u);
}

TEST(Dimension, MemberIdentityIsLevelQualified) {
  auto wc = fixture_dimension("work_class");
  const Member a = wc->member(0, "Private");
  const Member b = wc->member(1, "Private");
  EXPECT_NE(a, b);
  EXPECT_EQ(wc->value(a), wc->value(b));
  EXPECT_EQ(wc->anc(a, 1), b);
}

TEST(Dimension, OrderFollowsIngestion) {
  auto wc = fixture_dimension("work_class");
  const auto& l1 = wc->level(1);
  EXPECT_EQ(l1.member(0), "Gov");
  EXPECT_EQ(l1.member(3), "No-pay");
}

TEST(Dimension, UnknownLevelIsPlanError) {
  auto wc = fixture_dimension("work_class");
  EXPECT_THROW(wc->level_index("L9"), PlanError);
  EXPECT_THROW(wc->member(0, "Pirate"), PlanError);
}

TEST(Dimension, TwoParentsRejected) {
  auto t = table({"L0", "L1"}, {{"a", "x"}, {"a", "y"}});
  EXPECT_THROW(single(t), Error);
}

TEST(Dimension, AllColumnRejected) {
  auto t = table({"L0", "ALL"}, {{"a", "x"}});
  EXPECT_THROW(single(t), Error);
}

TEST(Dimension, LatticeWithTwoPaths) {
  // day -> month -> year and day -> week: month and week are incomparable.
  std::vector<HierarchyTable> paths = {
      table({"day", "month", "year"}, {{"d1", "m1", "y1"}, {"d2", "m1", "y1"}, {"d3", "m2", "y1"}}),
      table({"day", "week"}, {{"d1", "w1"}, {"d2", "w2"}, {"d3", "w2"}}),
  };
  auto dim = load_dimension("time", paths);
  const int month = dim->level_index("month");
  const int week = dim->level_index("week");
  EXPECT_FALSE(dim->precedes(month, week));
  EXPECT_FALSE(dim->precedes(week, month));
  EXPECT_TRUE(dim->precedes(dim->level_index("day"), week));
  EXPECT_EQ(dim->anc("day", "week", "d3"), "w2");
}

TEST(Dimension, PathsMustShareBottom) {
  std::vector<HierarchyTable> paths = {table({"day", "month"}, {{"d1", "m1"}}), table({"hour", "week"}, {{"h", "w"}})};
  EXPECT_THROW(load_dimension("time", paths), Error);
}

TEST(Dimension, Properties) {
  auto t = table({"L0", "L0:size", "L1"}, {{"a", "1", "x"}, {"b", "2.5", "x"}});
  auto dim = single(t);
  const auto* p = dim->level(0).property("size");
  ASSERT_NE(p, nullptr);
  EXPECT_DOUBLE_EQ((*p)[1], 2.5);
  EXPECT_EQ(dim->level(0).find("b"), 1);
}

TEST(Dimension, AppendedMembersInheritAncestors) {
  auto year = fixture_dimension("year");
  auto ext = year->with_appended_members(0, {"2017", "2018"});
  EXPECT_EQ(ext->level(0).size(), year->level(0).size() + 2);
  EXPECT_EQ(ext->anc("L0", "ALL", "2018"), "all");
  EXPECT_EQ(year->level(0).size(), 17u);
}
