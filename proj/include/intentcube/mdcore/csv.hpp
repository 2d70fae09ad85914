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
#include <string>
#include <string_view>

#include "intentcube/mdcore/cube.hpp"
#include "intentcube/mdcore/dimension.hpp"

namespace intentcube {

// Header row plus data rows; the same shape serves hierarchy and fact tables.
using CsvTable = HierarchyTable;

// Comma separated, double-quote escaping, first row is the header. Blank
// lines are skipped.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

// One coordinate column per axis (`dim.Level`) followed by the measures.
std::string to_csv(const Cube& cube);

std::string format_number(double v);

}  // namespace intentcube
