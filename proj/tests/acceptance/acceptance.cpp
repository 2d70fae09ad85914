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

// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
//
//   acceptance ENGINE CATALOG_DIR SCRIPT
//
// Criteria backed by the example session drive `ENGINE run` on SCRIPT; the
// others run in process.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../common/expected_tables.hpp"
#include "../common/testkit.hpp"
#include "intentcube/highlights/highlights.hpp"
#include "intentcube/intents/documents.hpp"
#include "intentcube/models/algorithms.hpp"
#include "intentcube/models/stats.hpp"

using namespace intentcube;
using namespace intentcube::testing;
using nlohmann::json;

namespace {

const std::string kHours = "HoursPerWeek";

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) note << "failed: " << what << "; ";
    ok = ok && cond;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string run_engine(const std::string& engine, const std::string& catalog, const std::string& script, int& status) {
  const std::string cmd = "ENGINE_SEED=42 '" + engine + "' run --catalog '" + catalog + "' --script '" + script + "'";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return {};
  }
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  status = pclose(pipe);
  return out;
}

std::vector<json> documents(const std::string& output) {
  std::vector<json> docs;
  std::istringstream in(output);
  std::string line;
  while (std::getline(in, line)) docs.push_back(json::parse(line));
  return docs;
}

const json& component(const json& doc, std::size_t model, const std::string& name) {
  for (const auto& c : doc["models"][model]["components"]) {
    if (c["name"] == name) return c;
  }
  throw std::runtime_error("no component " + name);
}

std::vector<std::size_t> core_of(const json& c) {
  std::vector<std::size_t> out;
  const auto& e = c["elements"];
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i].get<double>() == 1.0) out.push_back(i);
  }
  return out;
}

double component_score(const json& highlight, const std::string& name) {
  for (const auto& cs : highlight["per_component_scores"]) {
    if (cs["component"] == name) return cs["score"].get<double>();
  }
  return NAN;
}

template <std::size_t N>
double max_error(const std::vector<double>& got, const std::array<double, N>& want) {
  if (got.size() != N) return INFINITY;
  double worst = 0;
  for (std::size_t i = 0; i < N; ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
  return worst;
}

// Synthetic candidates over the region levels, values drawn at random.
std::shared_ptr<const Cube> region_cube(const Catalog& cat, int level, const std::vector<double>& values,
                                        const std::string& name) {
  auto dim = cat.dimension("region");
  std::vector<Cell> cells;
  for (int i = 0; i < static_cast<int>(dim->level(level).size()); ++i) {
    cells.push_back({{Member{level, i}}, {values[static_cast<std::size_t>(i)]}});
  }
  return std::make_shared<const Cube>(name, std::vector<Axis>{{dim, level}}, std::vector<std::string>{"Revenue"}, cells);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: acceptance ENGINE CATALOG_DIR SCRIPT\n";
    return 2;
  }
  const std::string engine_path = argv[1];
  const std::string catalog_dir = argv[2];
  const std::string script = argv[3];

  Engine engine(std::make_shared<Catalog>());
  load_catalog_directory(engine, catalog_dir);
  const auto& cat = engine.catalog();
  const auto co = cat.cube("CO");
  const auto cn = cat.cube("CN");
  const auto functions = FunctionRegistry::with_defaults();

  int status = 0;
  const auto t_run = Clock::now();
  const auto first = run_engine(engine_path, catalog_dir, script, status);
  const double run_seconds = seconds_since(t_run);
  std::vector<json> docs;
  std::string run_error;
  try {
    docs = documents(first);
  } catch (const std::exception& e) {
    run_error = e.what();
  }
  const bool session_ok = status == 0 && run_error.empty() && docs.size() == 6;

  std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria;

  criteria.emplace_back("significance tables", [&](Outcome& o) {
    const auto t0 = Clock::now();
    const auto& z = functions.significance("zscore");
    const double e_co = max_error(z(*co, kHours, {}, ""), kZscoresCO);
    const double e_cn = max_error(z(*cn, kHours, {}, ""), kZscoresCN);
    const double secs = seconds_since(t0);
    o.expect(e_co <= 1e-3, "CO z-scores within 0.001");
    o.expect(e_cn <= 1e-3, "CN z-scores within 0.001");
    o.expect(secs < 1.0, "under 1 s");
    o.note << "36 values, max error " << std::max(e_co, e_cn) << ", " << secs * 1e3 << " ms";
  });

  criteria.emplace_back("surprise table", [&](Outcome& o) {
    const auto& z = functions.significance("zscore");
    const auto s = surprise(z(*cn, kHours, {}, ""), z(*co, kHours, {}, ""), proxies(*co, *cn), functions.delta("abs_diff"));
    const double err = max_error(s, kSurpriseCN);
    o.expect(err <= 1e-3, "24 surprises within 0.001");
    o.expect(std::abs(s[5] - 0.477) <= 1e-3, "(Assoc, Self-emp-not-inc) = 0.477");
    o.expect(std::abs(s[10] - 1.134) <= 1e-3, "(Post-grad, Self-emp-inc) = 1.134");
    o.expect(std::abs(s[14] - 0.582) <= 1e-3, "(Some-college, State-gov) = 0.582");
    o.note << "max error " << err;
  });

  criteria.emplace_back("component race", [&](Outcome& o) {
    o.expect(session_ok, "engine run succeeded");
    if (!session_ok) return;
    const auto& h = docs[0]["highlight"];
    const double top5 = component_score(h, "Top-5");
    const double out = component_score(h, "Outliers");
    o.expect(top5 >= 0.60 && top5 <= 0.62, "Top-5 mean in [0.60, 0.62]");
    o.expect(out >= 0.85 && out <= 0.86, "Outliers mean in [0.85, 0.86]");
    o.expect(h["component"] == "Outliers", "Outliers selected");
    o.expect(h["core_cell_coordinates"] == json::parse(R"([["Post-grad","Self-emp-inc"],["Some-college","State-gov"]])"),
             "core cells");
    o.note << "Top-5 " << top5 << ", Outliers " << out << ", core " << h["core_cell_coordinates"].dump();
  });

  criteria.emplace_back("KPI assessment", [&](Outcome& o) {
    o.expect(session_ok, "engine run succeeded");
    if (!session_ok) return;
    const auto& d = docs[1];
    int low = 0, expected = 0, excessive = 0;
    for (const auto& l : component(d, 0, "Assessment")["elements"]) {
      low += l == "Low";
      expected += l == "Expected";
      excessive += l == "Excessive";
    }
    o.expect(low == 3 && expected == 21 && excessive == 0, "3 Low, 21 Expected, 0 Excessive");
    const auto& bits = component(d, 0, "Low")["elements"];
    bool same = bits.size() == kLowCN.size();
    for (std::size_t i = 0; same && i < bits.size(); ++i) same = bits[i].get<double>() == kLowCN[i];
    o.expect(same, "Low bitmap matches column for column");
    o.expect(d["highlight"]["component"] == "Low", "Low selected");
    o.note << low << " Low, " << expected << " Expected, " << excessive << " Excessive";
  });

  criteria.emplace_back("rank and top-k", [&](Outcome& o) {
    const auto m = topk(cn, kHours, 5);
    const auto& rank = m.component("Rank").values;
    bool same = rank.size() == kRankCN.size();
    for (std::size_t i = 0; same && i < rank.size(); ++i) same = static_cast<int>(rank[i]) == kRankCN[i];
    o.expect(same, "Rank column");
    const auto& top = m.component("Top-5").values;
    const auto& rest = m.component("Non-top-5").values;
    bool bitmaps = true;
    for (std::size_t i = 0; i < top.size(); ++i) {
      bitmaps = bitmaps && top[i] == (kRankCN[i] <= 5 ? 1.0 : 0.0) && rest[i] == 1.0 - top[i];
    }
    o.expect(bitmaps, "Top-5 and Non-top-5 bitmaps");
    o.note << "24 ranks, Top-5 cells " << m.component("Top-5").core_cells().size();
  });

  criteria.emplace_back("assess against Female benchmark", [&](Outcome& o) {
    o.expect(session_ok, "engine run succeeded");
    if (!session_ok) return;
    const auto& d = docs[2];
    std::vector<double> disc;
    for (const auto& v : component(d, 0, "Discrepancy")["elements"]) disc.push_back(v.get<double>());
    const double err = max_error(disc, kFemaleDiscrepancy);
    o.expect(err <= 0.01, "24 discrepancies within 0.01");
    const auto minus = core_of(component(d, 0, "MC-"));
    o.expect(minus == std::vector<std::size_t>{2, 6}, "MC- = (Assoc, State-gov), (Post-grad, Federal-gov)");
    o.expect(d["highlight"]["component"] == "MC+", "MC+ selected");
    o.note << "max error " << err << ", MC- size " << minus.size();
  });

  criteria.emplace_back("explain with variance test", [&](Outcome& o) {
    o.expect(session_ok, "engine run succeeded");
    if (!session_ok) return;
    const auto& d = docs[3];
    std::vector<double> disc;
    for (const auto& v : component(d, 0, "Discrepancy")["elements"]) disc.push_back(v.get<double>());
    const double err = max_error(disc, kGovDiscrepancy);
    o.expect(err <= 0.01, "12 discrepancies within 0.01");
    const auto above = core_of(component(d, 0, "AboveStdev"));
    std::vector<std::size_t> want;
    for (std::size_t i = 0; i < kGovAboveStdev.size(); ++i) {
      if (kGovAboveStdev[i]) want.push_back(i);
    }
    o.expect(above == want, "AboveStdev = the 3 printed cells");
    o.expect(d["highlight"]["component"] == "AboveStdev", "AboveStdev selected");
    o.note << "max error " << err << ", AboveStdev " << d["highlight"]["core_cell_coordinates"].dump();
  });

  criteria.emplace_back("predict", [&](Outcome& o) {
    o.expect(session_ok, "engine run succeeded");
    if (!session_ok) return;
    const auto& d = docs[4];
    const auto known = core_of(component(d, 0, "Known"));
    const auto predicted = core_of(component(d, 0, "Predicted"));
    std::vector<std::size_t> want_known(17), want_predicted(5);
    for (std::size_t i = 0; i < 17; ++i) want_known[i] = i;
    for (std::size_t i = 0; i < 5; ++i) want_predicted[i] = 17 + i;
    o.expect(known == want_known, "Known = 2000..2016");
    o.expect(predicted == want_predicted, "Predicted = 2017..2021");
    o.expect(d["highlight"]["core_cell_coordinates"] == json::parse(R"([["2017"],["2018"],["2019"],["2020"],["2021"]])"),
             "highlight core");
    // AR(1) closed form on a synthetic series.
    std::vector<double> x = {1};
    for (int i = 1; i < 20; ++i) x.push_back(0.5 * x.back() + 3);
    const auto m = ar_predict(line_cube({x}), "m", "t", 4, 1, 1);
    double last = x.back(), worst = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      last = 0.5 * last + 3;
      worst = std::max(worst, std::abs(m.cube->cell(20 + i).measures[0] - last));
    }
    o.expect(worst <= 1e-6, "AR(1) forecasts within 1e-6");
    o.note << "AR(1) max error " << worst;
  });

  criteria.emplace_back("suggest", [&](Outcome& o) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.5, 100);
    const auto suggest_plan = [] {
      ScoringPlan p;
      p.significance_new = {"component", "Score"};
      p.significance_old = {"const", "0"};
      p.delta = "diff";
      p.component_aggregation = "max";
      return p;
    }();
    double worst = 0;
    bool winners = true;
    const int scenarios = 50;
    for (int s = 0; s < scenarios; ++s) {
      // Two candidates, or three on odd scenarios.
      std::vector<int> levels = s % 2 ? std::vector<int>{0, 1, 2} : std::vector<int>{s % 4 == 0 ? 0 : 1, 2};
      std::vector<std::shared_ptr<const Cube>> cands;
      std::vector<std::string> names;
      std::vector<double> direct;
      for (int level : levels) {
        std::vector<double> v(8);
        for (auto& x : v) x = u(rng);
        cands.push_back(region_cube(cat, level, v, "c" + std::to_string(level)));
        names.push_back("c" + std::to_string(level));
        const auto col = cands.back()->column("Revenue");
        double total = 0, kl = 0;
        for (double y : col) total += y;
        for (double y : col) kl += y / total * std::log(y / total * static_cast<double>(col.size()));
        direct.push_back(kl);
      }
      const auto model = inform(cands, names, "Revenue");
      for (std::size_t k = 0; k < direct.size(); ++k) {
        worst = std::max(worst, std::abs(model.characterization.at("kl_" + std::to_string(k + 1)) - direct[k]));
      }
      const auto h = select_highlight({model}, suggest_plan, *cands[0], *model.cube, proxies(*cands[0], *model.cube),
                                      "Revenue", functions);
      const auto best = std::max_element(direct.begin(), direct.end()) - direct.begin();
      winners = winners && h.component == "Candidate_" + std::to_string(best + 1);
    }
    o.expect(worst <= 1e-9, "KL scores within 1e-9 of the direct formula");
    o.expect(winners, "max-scoring candidate highlighted");
    o.expect(session_ok, "engine run succeeded");
    if (session_ok) {
      const auto& d = docs[5];
      const std::string winner = d["highlight"]["component"];
      std::string query;
      for (const auto& b : d["models"][0]["binding"]) {
        if (b[0] == "candidate_" + winner.substr(winner.find('_') + 1)) query = b[1];
      }
      o.expect(query.find("region.L0") != std::string::npos, "finer grouping wins on the skewed stand-in");
      o.note << scenarios << " scenarios, max KL error " << worst << ", session winner: " << query;
    }
  });

  criteria.emplace_back("cube query oracle", [&](Outcome& o) {
    const auto t0 = Clock::now();
    const auto check = cube_query_oracle(200, 2024);
    const double secs = seconds_since(t0);
    o.expect(check.ok, check.detail);
    o.expect(check.cases == 200, "200 schemas");
    o.expect(secs < 30, "under 30 s");
    o.note << check.cases << " random star schemas, " << secs << " s";
  });

  criteria.emplace_back("property suites", [&](Outcome& o) {
    int laws = 0;
    for (const auto& name : cat.dimension_names()) {
      const auto check = hierarchy_laws(*cat.dimension(name));
      o.expect(check.ok, name + ": " + check.detail);
      laws += check.cases;
    }
    const auto partition = partition_law(100, 99);
    o.expect(partition.ok, partition.detail);
    const auto round_trip = parser_round_trip(500, 7);
    o.expect(round_trip.ok, round_trip.detail);
    int again_status = 0;
    const auto second = run_engine(engine_path, catalog_dir, script, again_status);
    o.expect(session_ok && again_status == 0 && second == first, "two runs print byte-identical JSON");
    o.note << laws << " hierarchy checks, " << partition.cases << " models, " << round_trip.cases
           << " round trips, " << first.size() << " bytes identical across runs (" << run_seconds << " s per run)";
  });

  criteria.emplace_back("sample standard deviation divisor", [&](Outcome& o) {
    double worst = 0;
    const auto z_co = stats::zscores(co->column(kHours), 0);
    const auto z_cn = stats::zscores(cn->column(kHours), 0);
    for (std::size_t i = 0; i < kZscoresCO.size(); ++i) worst = std::max(worst, std::abs(std::abs(z_co[i]) - kZscoresCO[i]));
    for (std::size_t i = 0; i < kZscoresCN.size(); ++i) worst = std::max(worst, std::abs(std::abs(z_cn[i]) - kZscoresCN[i]));
    o.expect(worst > 0.02, "divisor n misses the tables by more than 0.02");
    o.note << "divisor n misses by " << worst;
  });

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.note << "exception: " << e.what();
    }
    failures += o.ok ? 0 : 1;
    std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << k + 1 << ": " << criteria[k].first << " (" << o.note.str()
              << ")\n";
  }
  if (!session_ok) std::cout << "engine run: status " << status << " " << run_error << "\n";
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
