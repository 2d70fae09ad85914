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

#include <filesystem>
#include <memory>
#include <string>

#include "intentcube/mdcore/catalog.hpp"
#include "intentcube/mdcore/csv.hpp"
#include "intentcube/mdcore/dimension.hpp"

namespace intentcube::testing {

inline std::filesystem::path fixture_dir() { return FIXTURE_DIR; }

inline std::shared_ptr<const Dimension> fixture_dimension(const std::string& name) {
  const auto table = read_csv(fixture_dir() / "catalog" / "dimensions" / (name + ".csv"));
  return load_dimension(name, std::span<const HierarchyTable>(&table, 1));
}

// Dimensions and the printed cubes, without the JSON catalog loader.
inline std::shared_ptr<Catalog> fixture_catalog() {
  auto cat = std::make_shared<Catalog>();
  for (const char* d : {"education", "work_class", "gender", "year", "region"}) cat->add_dimension(fixture_dimension(d));
  const auto root = fixture_dir() / "catalog";
  auto load = [&](const std::string& name, const std::filesystem::path& rel) {
    cat->add_cube(std::make_shared<const Cube>(ingest_cube(name, read_csv(root / rel), *cat)));
  };
  load("DS", "facts/ds.csv");
  load("CO", "cubes/co.csv");
  load("CN", "cubes/cn.csv");
  load("OECD", "facts/oecd.csv");
  load("SALES", "facts/sales.csv");
  return cat;
}

inline std::shared_ptr<const Cube> fixture_cube(const std::string& name) {
  static const auto cat = fixture_catalog();
  return cat->cube(name);
}

}  // namespace intentcube::testing
