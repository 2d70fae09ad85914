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

#include "intentcube/intents/documents.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "intentcube/error.hpp"
#include "intentcube/iql/parser.hpp"
#include "intentcube/mdcore/csv.hpp"

namespace intentcube {

using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const std::vector<double>& vs) {
  json out = json::array();
  for (double v : vs) out.push_back(number(v));
  return out;
}

json map_of(const std::map<std::string, double>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[k] = number(v);
  return out;
}

json cube_json(const Cube& cube) {
  json axes = json::array();
  for (const auto& a : cube.axes()) {
    axes.push_back({{"dimension", a.dimension->name()}, {"level", a.dimension->level(a.level).name()}});
  }
  json cells = json::array();
  for (std::size_t i = 0; i < cube.size(); ++i) {
    const auto& cell = cube.cell(i);
    json coords = json::array();
    json levels = json::array();
    for (std::size_t a = 0; a < cube.axes().size(); ++a) {
      const auto& d = *cube.axes()[a].dimension;
      coords.push_back(d.value(cell.coords[a]));
      levels.push_back(d.level(cell.coords[a].level).name());
    }
    json c = {{"coordinates", coords}, {"measures", numbers(cell.measures)}};
    if (cube.mixed()) c["levels"] = levels;
    cells.push_back(std::move(c));
  }
  return {{"name", cube.name()},
          {"schema", {{"axes", axes}, {"measures", cube.measures()}, {"mixed", cube.mixed()}}},
          {"cells", cells}};
}

const char* kind_name(ComponentKind k) {
  switch (k) {
    case ComponentKind::Numeric: return "numeric";
    case ComponentKind::Boolean: return "boolean";
    case ComponentKind::Label: return "label";
  }
  return "numeric";
}

json model_json(const Model& m) {
  json binding = json::array();
  for (const auto& [k, v] : m.binding) binding.push_back({k, v});
  json components = json::array();
  for (const auto& c : m.components) {
    json elements = json::array();
    if (c.kind == ComponentKind::Label) {
      elements = c.labels;
    } else {
      elements = numbers(c.values);
    }
    json j = {{"name", c.name},
              {"kind", kind_name(c.kind)},
              {"core_predicate", c.core_predicate()},
              {"candidate", c.candidate},
              {"elements", elements}};
    if (!c.family.empty()) j["family"] = c.family;
    if (!c.characterization.empty()) j["characterization"] = map_of(c.characterization);
    components.push_back(std::move(j));
  }
  return {{"type", m.type},
          {"measure", m.measure},
          {"binding", binding},
          {"characterization", map_of(m.characterization)},
          {"components", components},
          {"warnings", m.warnings}};
}

json highlight_json(const Highlight& h, const EnhancedCube& r) {
  const auto& cube = *r.cube;
  json core = json::array();
  for (auto i : h.core_cells) {
    json coords = json::array();
    for (std::size_t a = 0; a < cube.axes().size(); ++a) coords.push_back(cube.label(i, a));
    core.push_back(std::move(coords));
  }
  json per_component = json::array();
  for (const auto& cs : h.component_scores) {
    per_component.push_back(
        {{"model", cs.model}, {"component", cs.component}, {"score", number(cs.score)}, {"core_size", cs.core_size}});
  }
  json j = {{"model", h.model},
            {"model_type", h.model_type},
            {"component", h.component},
            {"score", number(h.score)},
            {"core_cells", h.core_cells},
            {"core_cell_coordinates", core},
            {"per_model_scores", numbers(h.model_scores)},
            {"per_component_scores", per_component}};
  if (!h.model_type.empty() && h.model < r.models.size()) j["measure"] = r.models[h.model].measure;
  return j;
}

json plan_json(const ScoringPlan& p) {
  return {{"significance_new", p.significance_new.str()},
          {"significance_old", p.significance_old.str()},
          {"delta", p.delta},
          {"component_aggregation", p.component_aggregation},
          {"model_aggregation", p.model_aggregation}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PlanError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw PlanError(path.string() + ": " + e.what());
  }
}

std::string text_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw PlanError(std::string("catalog entry needs a string field '") + key + "'");
  return it->get<std::string>();
}

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& rel) {
  std::filesystem::path p(rel);
  return p.is_absolute() || base.empty() ? p : base / p;
}

// `csv` (inline text) or `key` (a file path).
CsvTable table_of(const json& j, const char* key, const std::filesystem::path& base) {
  if (auto it = j.find("csv"); it != j.end() && it->is_string()) return parse_csv(it->get<std::string>());
  return read_csv(resolve_path(base, text_field(j, key)));
}

void add_dimension(Engine& engine, const json& j, const std::filesystem::path& base) {
  const auto name = text_field(j, "name");
  std::vector<HierarchyTable> tables;
  if (auto it = j.find("paths"); it != j.end()) {
    for (const auto& p : *it) tables.push_back(read_csv(resolve_path(base, p.get<std::string>())));
  }
  if (auto it = j.find("csv"); it != j.end()) {
    if (it->is_string()) {
      tables.push_back(parse_csv(it->get<std::string>()));
    } else {
      for (const auto& t : *it) tables.push_back(parse_csv(t.get<std::string>()));
    }
  }
  if (tables.empty()) throw PlanError("dimension " + name + " needs 'paths' or 'csv'");
  auto dim = load_dimension(name, tables);
  for (const auto& w : dim->warnings()) engine.catalog().add_warning(name + ": " + w);
  engine.catalog().add_dimension(std::move(dim));
}

void add_cube(Engine& engine, const json& j, const std::filesystem::path& base) {
  auto& catalog = engine.catalog();
  const auto name = text_field(j, "name");
  std::optional<CubeQuery> query;
  if (j.contains("query")) query = iql::parse_cube_query(text_field(j, "query"));
  const char* key = j.contains("facts") ? "facts" : "cells";
  if (!j.contains(key) && !j.contains("csv")) {
    if (!query) throw PlanError("cube " + name + " needs 'facts', 'cells', 'csv' or 'query'");
    catalog.add_query_cube(name, *query);
    return;
  }
  std::vector<std::string> warnings;
  auto cube = std::make_shared<const Cube>(ingest_cube(name, table_of(j, key, base), catalog, &warnings));
  for (const auto& w : warnings) catalog.add_warning(name + ": " + w);
  catalog.add_cube(std::move(cube), std::move(query));
}

void add_benchmark(Engine& engine, const json& j) {
  engine.catalog().add_benchmark(text_field(j, "name"), iql::parse_cube_query(text_field(j, "query")));
}

void add_kpi(Engine& engine, const json& j) {
  KpiDefinition kpi;
  kpi.name = text_field(j, "name");
  if (j.contains("target") && !j["target"].is_null()) kpi.target = text_field(j, "target");
  if (!j.contains("rules")) throw PlanError("kpi " + kpi.name + " needs 'rules'");
  const auto& rules = j["rules"];
  if (rules.is_string()) {
    kpi.rules = parse_kpi_rules(rules.get<std::string>());
  } else {
    for (const auto& r : rules) {
      KpiRule rule;
      rule.label = text_field(r, "label");
      if (r.contains("lo") && !r["lo"].is_null()) rule.lo = r["lo"].get<double>();
      if (r.contains("hi") && !r["hi"].is_null()) rule.hi = r["hi"].get<double>();
      if (!(rule.lo < rule.hi)) throw PlanError("kpi rule " + rule.label + " has an empty interval");
      kpi.rules.push_back(std::move(rule));
    }
  }
  engine.add_kpi(std::move(kpi));
}

std::string register_entry(Engine& engine, std::string_view kind, const json& j, const std::filesystem::path& base) {
  if (!j.is_object()) throw PlanError("catalog entry must be a JSON object");
  try {
    if (kind == "dimension") {
      add_dimension(engine, j, base);
    } else if (kind == "cube") {
      add_cube(engine, j, base);
    } else if (kind == "benchmark") {
      add_benchmark(engine, j);
    } else if (kind == "kpi-rules") {
      add_kpi(engine, j);
    } else {
      throw PlanError("unknown catalog kind " + std::string(kind));
    }
  } catch (const json::exception& e) {
    throw PlanError(std::string("malformed catalog entry: ") + e.what());
  }
  return text_field(j, "name");
}

}  // namespace

std::string to_json(const EnhancedCube& r) {
  json models = json::array();
  for (const auto& m : r.models) models.push_back(model_json(m));
  json highlights = json::array();
  for (const auto& h : r.highlights) highlights.push_back(highlight_json(h, r));

  json plan = json::object();
  plan["verb"] = r.provenance.verb;
  plan["query"] = r.provenance.query ? json(iql::render(*r.provenance.query)) : json(nullptr);
  plan["view"] = r.provenance.view.empty() ? json(nullptr) : json(r.provenance.view);
  plan["filter"] = r.provenance.filter ? json(iql::render(*r.provenance.filter)) : json(nullptr);
  plan["old_cube"] = r.provenance.old_cube.empty() ? json(nullptr) : json(r.provenance.old_cube);
  plan["models"] = r.provenance.model_calls;
  json scoring = json::array();
  for (const auto& p : r.provenance.scoring) scoring.push_back(plan_json(p));
  plan["scoring"] = scoring;

  json doc = {{"name", r.name},
              {"cube", cube_json(*r.cube)},
              {"models", models},
              {"highlight", highlights.empty() ? json(nullptr) : highlights.front()},
              {"highlights", highlights},
              {"provenance", {{"intention_text", r.provenance.text}, {"plan", plan}}},
              {"warnings", r.warnings}};
  return doc.dump();
}

std::string error_stage(const std::exception& e) {
  if (dynamic_cast<const iql::ParseError*>(&e)) return "parse";
  if (dynamic_cast<const PlanError*>(&e)) return "plan";
  return "execute";
}

std::string error_json(const std::exception& e) {
  json j = {{"stage", error_stage(e)}, {"message", e.what()}};
  if (const auto* p = dynamic_cast<const iql::ParseError*>(&e)) {
    j["position"] = {{"line", p->line()},
                     {"column", p->column()},
                     {"offset", p->offset()},
                     {"expected", p->expected()},
                     {"found", p->found()}};
  }
  return j.dump();
}

std::string catalog_json(const Engine& engine) {
  const auto& catalog = engine.catalog();
  json cubes = json::array();
  for (const auto& name : catalog.cube_names()) {
    const auto e = catalog.find_cube(name);
    json axes = json::array();
    for (const auto& a : e->cube->axes()) axes.push_back(a.qualified());
    cubes.push_back({{"name", name},
                     {"axes", axes},
                     {"measures", e->cube->measures()},
                     {"cells", e->cube->size()},
                     {"query", e->lineage ? json(iql::render(*e->lineage)) : json(nullptr)}});
  }
  json dims = json::array();
  for (const auto& name : catalog.dimension_names()) {
    const auto d = catalog.dimension(name);
    json levels = json::array();
    for (int l = 0; l < static_cast<int>(d->level_count()); ++l) levels.push_back(d->level(l).name());
    dims.push_back({{"name", name}, {"levels", levels}});
  }
  json benchmarks = json::array();
  for (const auto& name : catalog.benchmark_names()) {
    benchmarks.push_back({{"name", name}, {"query", iql::render(*catalog.find_benchmark(name))}});
  }
  return json{{"dimensions", dims},
              {"cubes", cubes},
              {"benchmarks", benchmarks},
              {"kpi_rules", engine.kpi_names()},
              {"model_types", engine.models().names()},
              {"warnings", catalog.warnings()}}
      .dump();
}

void load_catalog_directory(Engine& engine, const std::filesystem::path& dir) {
  const auto doc = read_json_file(dir / "catalog.json");
  const std::pair<const char*, const char*> sections[] = {
      {"dimensions", "dimension"}, {"cubes", "cube"}, {"benchmarks", "benchmark"}, {"kpi_rules", "kpi-rules"}};
  for (const auto& [section, kind] : sections) {
    if (!doc.contains(section)) continue;
    for (const auto& entry : doc[section]) register_entry(engine, kind, entry, dir);
  }
}

std::string register_catalog_entry(Engine& engine, std::string_view kind, std::string_view body,
                                   const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw PlanError(std::string("request body is not JSON: ") + e.what());
  }
  return register_entry(engine, kind, j, base_dir);
}

std::string canonical_text(std::string_view text) { return iql::render(iql::parse_statement(text)); }

}  // namespace intentcube
