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

#include "intentcube/mdcore/catalog.hpp"

#include <mutex>

#include "intentcube/error.hpp"

namespace intentcube {

Cube ingest_cube(std::string name, const CsvTable& table, const DimensionLookup& dims, std::vector<std::string>* warnings) {
  std::vector<Axis> axes;
  std::vector<std::size_t> coord_cols;
  std::vector<std::string> measures;
  std::vector<std::size_t> measure_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const auto& h = table.header[c];
    const auto dot = h.find('.');
    if (dot == std::string::npos) {
      measures.push_back(h);
      measure_cols.push_back(c);
      continue;
    }
    auto dim = dims.dimension(h.substr(0, dot));
    axes.push_back({dim, dim->level_index(h.substr(dot + 1))});
    coord_cols.push_back(c);
  }
  if (table.rows.empty() && warnings) warnings->push_back("cube " + name + ": no fact rows");

  std::vector<Cell> cells;
  cells.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = "cube " + name + " row " + std::to_string(r + 1);
    if (row.size() != table.header.size()) {
      throw PlanError(where + ": " + std::to_string(row.size()) + " fields, expected " + std::to_string(table.header.size()));
    }
    Cell cell;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const auto& value = row[coord_cols[a]];
      auto ord = axes[a].dimension->level(axes[a].level).find(value);
      if (!ord) throw PlanError(where + ": unknown member '" + value + "' in " + axes[a].qualified());
      cell.coords.push_back({axes[a].level, *ord});
    }
    for (std::size_t m = 0; m < measures.size(); ++m) {
      const auto& text = row[measure_cols[m]];
      if (text.empty()) throw PlanError(where + ": missing value for measure " + measures[m]);
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != text.size()) throw PlanError(where + ": measure " + measures[m] + " value '" + text + "' is not numeric");
      cell.measures.push_back(v);
    }
    cells.push_back(std::move(cell));
  }
  return Cube(std::move(name), std::move(axes), std::move(measures), std::move(cells));
}

void Catalog::add_dimension(std::shared_ptr<const Dimension> dim) {
  std::unique_lock lock(mu_);
  const auto name = dim->name();
  if (!dimensions_.emplace(name, std::move(dim)).second) throw PlanError("dimension " + name + " is already registered");
}

std::shared_ptr<const Dimension> Catalog::find_dimension(std::string_view name) const {
  std::shared_lock lock(mu_);
  auto it = dimensions_.find(name);
  return it == dimensions_.end() ? nullptr : it->second;
}

std::shared_ptr<const Dimension> Catalog::dimension(std::string_view name) const {
  if (auto d = find_dimension(name)) return d;
  throw PlanError("unknown dimension " + std::string(name));
}

std::vector<std::string> Catalog::dimension_names() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& [k, v] : dimensions_) out.push_back(k);
  return out;
}

void Catalog::add_cube(std::shared_ptr<const Cube> cube, std::optional<CubeQuery> lineage) {
  std::unique_lock lock(mu_);
  const auto name = cube->name();
  if (benchmarks_.count(name)) throw PlanError("name " + name + " is already used by a benchmark");
  if (!cubes_.emplace(name, CubeEntry{std::move(cube), std::move(lineage)}).second) {
    throw PlanError("cube " + name + " is already registered");
  }
}

std::shared_ptr<const Cube> Catalog::evaluate(const CubeQuery& q, std::string result_name) const {
  auto base = cube(q.source);
  return std::make_shared<const Cube>(eval_cube_query(*base, q, std::move(result_name)));
}

std::shared_ptr<const Cube> Catalog::add_query_cube(std::string name, const CubeQuery& q) {
  auto result = evaluate(q, name);
  add_cube(result, q);
  return result;
}

std::optional<Catalog::CubeEntry> Catalog::find_cube(std::string_view name) const {
  std::shared_lock lock(mu_);
  auto it = cubes_.find(name);
  if (it == cubes_.end()) return std::nullopt;
  return it->second;
}

std::shared_ptr<const Cube> Catalog::cube(std::string_view name) const {
  if (auto e = find_cube(name)) return e->cube;
  throw PlanError("unknown cube " + std::string(name));
}

std::vector<std::string> Catalog::cube_names() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& [k, v] : cubes_) out.push_back(k);
  return out;
}

void Catalog::add_benchmark(std::string name, CubeQuery q) {
  std::unique_lock lock(mu_);
  if (cubes_.count(name)) throw PlanError("name " + name + " is already used by a cube");
  if (!benchmarks_.emplace(name, std::move(q)).second) throw PlanError("benchmark " + name + " is already registered");
}

std::optional<CubeQuery> Catalog::find_benchmark(std::string_view name) const {
  std::shared_lock lock(mu_);
  auto it = benchmarks_.find(name);
  if (it == benchmarks_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Catalog::benchmark_names() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& [k, v] : benchmarks_) out.push_back(k);
  return out;
}

std::vector<std::string> Catalog::warnings() const {
  std::shared_lock lock(mu_);
  return warnings_;
}

void Catalog::add_warning(std::string w) {
  std::unique_lock lock(mu_);
  warnings_.push_back(std::move(w));
}

}  // namespace intentcube
