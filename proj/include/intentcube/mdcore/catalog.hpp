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

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "intentcube/mdcore/csv.hpp"
#include "intentcube/mdcore/cube.hpp"
#include "intentcube/mdcore/query.hpp"

namespace intentcube {

class DimensionLookup {
 public:
  virtual ~DimensionLookup() = default;
  virtual std::shared_ptr<const Dimension> dimension(std::string_view name) const = 0;
};

// Builds a cube from a table whose `dim.Level` columns are coordinates and
// whose remaining columns are numeric measures.
Cube ingest_cube(std::string name, const CsvTable& table, const DimensionLookup& dims,
                 std::vector<std::string>* warnings = nullptr);

// Registered dimensions, cubes and benchmark queries. Concurrent reads,
// exclusive registration.
class Catalog : public DimensionLookup {
 public:
  struct CubeEntry {
    std::shared_ptr<const Cube> cube;
    // The query that produced the cube, when known. Operators that regroup a
    // cube rewrite this query instead of re-aggregating the cube's cells.
    std::optional<CubeQuery> lineage;
  };

  void add_dimension(std::shared_ptr<const Dimension> dim);
  std::shared_ptr<const Dimension> dimension(std::string_view name) const override;
  std::shared_ptr<const Dimension> find_dimension(std::string_view name) const;
  std::vector<std::string> dimension_names() const;

  void add_cube(std::shared_ptr<const Cube> cube, std::optional<CubeQuery> lineage = std::nullopt);
  // Evaluates the query and registers its result under `name`.
  std::shared_ptr<const Cube> add_query_cube(std::string name, const CubeQuery& q);
  std::shared_ptr<const Cube> cube(std::string_view name) const;
  std::optional<CubeEntry> find_cube(std::string_view name) const;
  std::vector<std::string> cube_names() const;
  std::shared_ptr<const Cube> evaluate(const CubeQuery& q, std::string result_name) const;

  void add_benchmark(std::string name, CubeQuery q);
  std::optional<CubeQuery> find_benchmark(std::string_view name) const;
  std::vector<std::string> benchmark_names() const;

  std::vector<std::string> warnings() const;
  void add_warning(std::string w);

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<const Dimension>, std::less<>> dimensions_;
  std::map<std::string, CubeEntry, std::less<>> cubes_;
  std::map<std::string, CubeQuery, std::less<>> benchmarks_;
  std::vector<std::string> warnings_;
};

}  // namespace intentcube
