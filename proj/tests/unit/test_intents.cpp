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

#include <cmath>
#include <set>

#include "../common/expected_tables.hpp"
#include "fixtures.hpp"
#include "intentcube/intents/documents.hpp"
#include "intentcube/intents/engine.hpp"
#include "intentcube/iql/parser.hpp"
#include "intentcube/models/algorithms.hpp"

namespace intentcube {
namespace {

using testing::fixture_dir;

std::shared_ptr<Engine> fixture_engine() {
  auto engine = std::make_shared<Engine>(std::make_shared<Catalog>());
  load_catalog_directory(*engine, fixture_dir() / "catalog");
  return engine;
}

std::vector<std::string> core_labels(const EnhancedCube& r, const Highlight& h) {
  std::vector<std::string> out;
  for (auto i : h.core_cells) {
    std::string s;
    for (std::size_t a = 0; a < r.cube->axes().size(); ++a) s += (a ? "/" : "") + r.cube->label(i, a);
    out.push_back(s);
  }
  return out;
}

class Intents : public ::testing::Test {
 protected:
  std::shared_ptr<Engine> engine = fixture_engine();
  Bindings bindings;

  EnhancedCube run(const std::string& text) { return engine->submit(text, bindings); }
};

TEST_F(Intents, LoaderRegistersEverything) {
  auto& cat = engine->catalog();
  EXPECT_EQ(cat.dimension_names().size(), 5u);
  EXPECT_EQ(cat.cube("CN")->size(), 24u);
  ASSERT_TRUE(cat.find_cube("CN")->lineage);
  EXPECT_EQ(cat.cube("SALES_BY_DISTRICT")->size(), 4u);
  EXPECT_TRUE(cat.find_benchmark("q_Female"));
  auto kpi = engine->find_kpi("hours_kpi");
  ASSERT_TRUE(kpi);
  ASSERT_EQ(kpi->rules.size(), 3u);
  EXPECT_TRUE(std::isinf(kpi->rules[2].hi));
  EXPECT_EQ(*kpi->target, "Expected");
}

TEST_F(Intents, DescribeReusesTheRegisteredView) {
  auto r = run("with CO describe HoursPerWeek by work_class.L0");
  EXPECT_EQ(r.provenance.view, "CN");
  EXPECT_EQ(r.cube, engine->catalog().cube("CN"));
  ASSERT_EQ(r.models.size(), 2u);
  ASSERT_EQ(r.highlights.size(), 1u);
  const auto& h = r.highlights[0];
  EXPECT_EQ(h.model_type, "outliers");
  EXPECT_EQ(h.component, "Outliers");
  EXPECT_NEAR(h.score, 0.858, 0.002);
  const auto top = std::find_if(h.component_scores.begin(), h.component_scores.end(),
                                [](const ComponentScore& c) { return c.component == "Top-5"; });
  ASSERT_NE(top, h.component_scores.end());
  EXPECT_GE(top->score, 0.60);
  EXPECT_LE(top->score, 0.62);
  EXPECT_EQ(core_labels(r, h), (std::vector<std::string>{"Post-grad/Self-emp-inc", "Some-college/State-gov"}));
}

TEST_F(Intents, DescribeIdentityIsIdempotent) {
  auto r = run("with CN describe HoursPerWeek by work_class.L0");
  EXPECT_EQ(r.cube, engine->catalog().cube("CN"));
  auto plain = run("with CN describe HoursPerWeek");
  EXPECT_EQ(plain.cube, engine->catalog().cube("CN"));
}

TEST_F(Intents, DescribeBySizeRunsKmeans) {
  auto r = run("with CN describe HoursPerWeek by size 3");
  ASSERT_EQ(r.models.size(), 1u);
  EXPECT_EQ(r.models[0].type, "kmeans");
  EXPECT_EQ(r.highlights[0].model_type, "kmeans");
}

TEST_F(Intents, DescribeFilterComposesWithLineage) {
  // Finer than CO: rewritten on the lineage, evaluated from the facts.
  auto r = run("with CO describe HoursPerWeek for gender.L0 = 'Female'");
  ASSERT_TRUE(r.provenance.query);
  EXPECT_EQ(r.provenance.query->where.kind, Condition::Kind::And);
  EXPECT_EQ(r.cube->size(), 12u);
  // Coarser than CN: filtered in place.
  auto g = run("with CN describe HoursPerWeek for work_class.L1 = 'Gov'");
  EXPECT_FALSE(g.provenance.query);
  EXPECT_EQ(g.cube->size(), 12u);
}

TEST_F(Intents, DescribeBelowTheBaseLevelIsAPlanError) {
  EXPECT_THROW(run("with CN describe HoursPerWeek by year.L0"), PlanError);
  EXPECT_THROW(run("with CN describe Salary"), PlanError);
  EXPECT_THROW(run("with NOPE describe HoursPerWeek"), PlanError);
}

TEST_F(Intents, AssessWithKpiSelectsLow) {
  auto r = run("with CN assess HoursPerWeek using hours_kpi");
  ASSERT_EQ(r.highlights.size(), 1u);
  EXPECT_EQ(r.highlights[0].component, "Low");
  const auto& low = r.models[0].component("Low");
  for (std::size_t i = 0; i < 24; ++i) EXPECT_EQ(low.values[i], testing::kLowCN[i]) << i;
  EXPECT_EQ(r.highlights[0].core_cells.size(), 3u);
}

TEST_F(Intents, AssessAgainstFemaleBenchmark) {
  auto r = run("with CN assess HoursPerWeek using q_Female");
  const auto& m = r.models[0];
  const auto& d = m.component("Discrepancy");
  for (std::size_t i = 0; i < 24; ++i) EXPECT_NEAR(d.values[i], testing::kFemaleDiscrepancy[i], 0.01) << i;
  EXPECT_EQ(m.component("MC-").core_cells(), (std::vector<std::size_t>{2, 6}));
  EXPECT_EQ(r.highlights[0].component, "MC+");
}

TEST_F(Intents, AssessAgainstConstantAndSelf) {
  auto r = run("with CN assess HoursPerWeek using 40, CN");
  ASSERT_EQ(r.models.size(), 2u);
  ASSERT_EQ(r.highlights.size(), 2u);
  EXPECT_EQ(r.highlights[1].model, 1u);
  for (double v : r.models[1].component("Discrepancy").values) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(r.highlights[1].component, "MC-");
  EXPECT_THROW(run("with CN assess HoursPerWeek using nothing_here"), PlanError);
}

TEST_F(Intents, ExplainVarianceAgainstOldSlice) {
  auto r = run("with CN explain HoursPerWeek for work_class.L1 = 'Gov' using ftest(work_class.L0) against CO");
  ASSERT_EQ(r.cube->size(), 12u);
  const auto& m = r.models[0];
  const auto& d = m.component("Discrepancy");
  for (std::size_t i = 0; i < 12; ++i) EXPECT_NEAR(d.values[i], testing::kGovDiscrepancy[i], 0.01) << i;
  const auto& h = r.highlights[0];
  EXPECT_EQ(h.component, "AboveStdev");
  EXPECT_EQ(h.core_cells.size(), 3u);
  for (std::size_t i = 0; i < 12; ++i) {
    EXPECT_EQ(m.component("AboveStdev").values[i], testing::kGovAboveStdev[i]) << i;
  }
  EXPECT_EQ(r.provenance.old_cube, "CO");
}

class LinearCube : public Intents {
 protected:
  void SetUp() override {
    register_catalog_entry(*engine, "cube",
                           R"({"name": "LIN", "csv": "region.L0,y,x\nLyon,2.1,1\nVilleurbanne,3.9,2\n)"
                           R"(Grenoble,6.2,3\nVienne,7.8,4\nTours,10.1,5\nAmboise,30,6\n)"
                           R"(Blois,14.2,7\nVendome,15.9,8\n"})");
  }
};

TEST_F(LinearCube, CorrelationHighlightsTheParticipants) {
  auto r = run("with LIN explain y using correlation(x)");
  const auto& h = r.highlights[0];
  EXPECT_EQ(h.component, "Participating");
  // Amboise breaks the line the most.
  EXPECT_NE(std::find(h.core_cells.begin(), h.core_cells.end(), *r.cube->find({{0, 5}})), h.core_cells.end());
}

TEST_F(LinearCube, ExplainAgainstItselfGivesZeroDeltas) {
  auto r = run("with LIN explain y using regression(x) against LIN");
  const auto& m = r.models[0];
  EXPECT_EQ(m.type, "delta_regression");
  for (const auto& c : m.components) {
    if (c.kind == ComponentKind::Numeric) {
      for (double v : c.values) EXPECT_EQ(v, 0.0) << c.name;
    } else if (c.name != "Stable") {
      EXPECT_TRUE(c.core_cells().empty()) << c.name;
    }
  }
  EXPECT_EQ(r.highlights[0].component, "Stable");
}

TEST_F(LinearCube, RegressionScoresTheResiduals) {
  auto r = run("with LIN explain y using regression(x)");
  EXPECT_EQ(r.highlights[0].component, "Above");
  EXPECT_EQ(r.provenance.scoring[0].significance_new.str(), "component(Discrepancy)");
}

TEST_F(Intents, PredictHighlightsTheForecast) {
  auto r = run("with OECD predict next 5 points of WeeklyHours over year using ar");
  EXPECT_EQ(r.cube->size(), 22u);
  const auto& h = r.highlights[0];
  EXPECT_EQ(h.component, "Predicted");
  EXPECT_EQ(core_labels(r, h), (std::vector<std::string>{"2017", "2018", "2019", "2020", "2021"}));
  EXPECT_TRUE(std::isnan(h.score));
}

TEST_F(Intents, PredictRejectsNonForecastingModels) {
  EXPECT_THROW(run("with OECD predict next 2 points of WeeklyHours over year using topk"), PlanError);
  EXPECT_THROW(run("with OECD predict next 2 points of WeeklyHours over year using nope"), PlanError);
}

TEST_F(Intents, SuggestPrefersTheFinerGrouping) {
  auto r = run("with SALES_BY_DISTRICT suggest");
  const auto& m = r.models[0];
  ASSERT_EQ(r.highlights.size(), 1u);
  const auto& h = r.highlights[0];
  const auto* winner = m.find(h.component);
  ASSERT_NE(winner, nullptr);
  std::string description;
  for (const auto& [k, v] : m.binding) {
    if (k == "candidate_" + h.component.substr(std::string("Candidate_").size())) description = v;
  }
  EXPECT_NE(description.find("region.L0"), std::string::npos) << description;

  // Scores equal the direct formula on the candidate cubes.
  auto cities = engine->catalog().cube("SALES")->column("Revenue");
  double total = 0;
  for (double v : cities) total += v;
  double kl = 0;
  for (double v : cities) kl += v / total * std::log(v / total * static_cast<double>(cities.size()));
  EXPECT_NEAR(h.score, kl, 1e-9);
  double best = 0;
  for (const auto& [k, v] : m.characterization) best = std::max(best, v);
  EXPECT_NEAR(h.score, best, 1e-12);
}

TEST_F(Intents, SuggestNeverRefinesBelowTheBase) {
  auto r = run("with SALES suggest");
  for (const auto& [k, v] : r.models[0].binding) {
    if (k.rfind("candidate_", 0) == 0) EXPECT_EQ(v.find("region.L0"), std::string::npos) << v;
  }
  EXPECT_THROW(run("with SALES suggest using magic"), PlanError);
}

TEST_F(Intents, CubeQueriesAndAliases) {
  auto r = run("cube DS group education.L3 agg avg(HoursPerWeek) as E3");
  EXPECT_EQ(r.name, "E3");
  EXPECT_EQ(r.cube->size(), 2u);
  auto d = run("with E3 describe HoursPerWeek by education.L2");
  EXPECT_EQ(d.provenance.query->source, "DS");
  EXPECT_EQ(d.cube->size(), 6u);
  EXPECT_THROW(run("cube DS group education.L3 agg avg(HoursPerWeek) as CN"), PlanError);
}

TEST_F(Intents, ProvenanceReplaysTheCube) {
  auto r = run("with CO describe HoursPerWeek for gender.L0 = 'Male' by education.L3");
  ASSERT_TRUE(r.provenance.query);
  auto replay = engine->catalog().evaluate(*r.provenance.query, "replay");
  ASSERT_EQ(replay->size(), r.cube->size());
  for (std::size_t i = 0; i < replay->size(); ++i) {
    EXPECT_EQ(replay->cell(i).coords, r.cube->cell(i).coords);
    EXPECT_EQ(replay->cell(i).measures, r.cube->cell(i).measures);
  }
}

TEST_F(Intents, EveryModelKeepsTheBijection) {
  for (const char* text : {"with CO describe HoursPerWeek by work_class.L0", "with CN assess HoursPerWeek using hours_kpi",
                           "with CN assess HoursPerWeek using q_Female",
                           "with CN explain HoursPerWeek for work_class.L1 = 'Gov' using ftest() against CO",
                           "with OECD predict next 3 points of WeeklyHours over year using ar",
                           "with SALES_BY_DISTRICT suggest"}) {
    auto r = run(text);
    for (const auto& m : r.models) {
      EXPECT_EQ(m.cube, r.cube) << text;
      EXPECT_NO_THROW(m.validate()) << text;
    }
  }
}

TEST_F(Intents, DocumentsAreDeterministic) {
  const std::string text = "with CO describe HoursPerWeek by work_class.L0";
  const auto a = to_json(run(text));
  Bindings other;
  const auto b = to_json(engine->submit(text, other));
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("\"core_cell_coordinates\":[[\"Post-grad\",\"Self-emp-inc\"],[\"Some-college\",\"State-gov\"]]"),
            std::string::npos);
  EXPECT_NE(a.find("\"intention_text\":\"with CO describe HoursPerWeek by work_class.L0\""), std::string::npos);
}

TEST(Documents, ErrorsCarryTheirStage) {
  Engine engine(std::make_shared<Catalog>());
  Bindings b;
  try {
    engine.submit("with CN describe", b);
    FAIL();
  } catch (const std::exception& e) {
    const auto j = error_json(e);
    EXPECT_NE(j.find("\"stage\":\"parse\""), std::string::npos) << j;
    EXPECT_NE(j.find("\"column\":17"), std::string::npos) << j;
  }
  try {
    engine.submit("with CN describe x", b);
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_EQ(error_stage(e), "plan");
  }
  EXPECT_EQ(error_stage(ExecutionError("x")), "execute");
}

TEST(Documents, RegistrationValidates) {
  Engine engine(std::make_shared<Catalog>());
  EXPECT_THROW(register_catalog_entry(engine, "dimension", "{not json"), PlanError);
  EXPECT_THROW(register_catalog_entry(engine, "widget", R"({"name": "w"})"), PlanError);
  EXPECT_EQ(register_catalog_entry(engine, "dimension", R"({"name": "d", "csv": "L0,L1\na,x\nb,x\n"})"), "d");
  EXPECT_THROW(register_catalog_entry(engine, "dimension", R"({"name": "d", "csv": "L0\na\n"})"), PlanError);
  EXPECT_EQ(register_catalog_entry(engine, "cube", R"({"name": "F", "csv": "d.L0,m\na,1\nb,2\n"})"), "F");
  EXPECT_THROW(register_catalog_entry(engine, "cube", R"({"name": "G", "csv": "d.L0,m\nzz,1\n"})"), PlanError);
  EXPECT_EQ(register_catalog_entry(engine, "kpi-rules", R"({"name": "k", "rules": "lo::1;hi:1:"})"), "k");
  EXPECT_THROW(register_catalog_entry(engine, "kpi-rules", R"({"name": "j", "rules": [{"label": "x", "lo": 2, "hi": 1}]})"),
               PlanError);
  EXPECT_EQ(register_catalog_entry(engine, "benchmark", R"j({"name": "bq", "query": "cube F group d.L1 agg sum(m)"})j"),
            "bq");
  const auto cat = catalog_json(engine);
  EXPECT_NE(cat.find("\"bq\""), std::string::npos);
  EXPECT_NE(cat.find("\"kpi_rules\":[\"k\"]"), std::string::npos);
}

TEST(Documents, CanonicalText) {
  EXPECT_EQ(canonical_text("with   CN describe HoursPerWeek  by work_class.L0"),
            "with CN describe HoursPerWeek by work_class.L0");
  EXPECT_THROW(canonical_text("with"), iql::ParseError);
}

TEST(Seed, EnvironmentOverride) {
  setenv("ENGINE_SEED", "7", 1);
  EXPECT_EQ(seed_from_environment(), 7u);
  setenv("ENGINE_SEED", "x7", 1);
  EXPECT_EQ(seed_from_environment(), 42u);
  unsetenv("ENGINE_SEED");
  EXPECT_EQ(seed_from_environment(), 42u);
}

}  // namespace
}  // namespace intentcube
