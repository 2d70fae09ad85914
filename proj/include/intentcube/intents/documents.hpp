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

#include <exception>
#include <filesystem>
#include <string>
#include <string_view>

#include "intentcube/intents/engine.hpp"

namespace intentcube {

// Compact JSON of an enhanced cube. Non-finite scores are written as null.
std::string to_json(const EnhancedCube& result);

// parse, plan or execute.
std::string error_stage(const std::exception& e);
// {"stage", "message", "position"?: {"line", "column", "offset", "expected", "found"}}
std::string error_json(const std::exception& e);

// Names of the registered dimensions, cubes, benchmarks, KPI rule sets and
// model types.
std::string catalog_json(const Engine& engine);

// Reads `catalog.json` from `dir`; file paths in it are relative to `dir`.
void load_catalog_directory(Engine& engine, const std::filesystem::path& dir);

// Registers one entry from a JSON document. `kind` is dimension, cube,
// benchmark or kpi-rules. Returns the registered name.
std::string register_catalog_entry(Engine& engine, std::string_view kind, std::string_view body,
                                   const std::filesystem::path& base_dir = {});

// Canonical text of an intention or cube query.
std::string canonical_text(std::string_view text);

}  // namespace intentcube
