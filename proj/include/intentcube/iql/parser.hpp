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

#include <string>
#include <string_view>
#include <vector>

#include "intentcube/error.hpp"
#include "intentcube/iql/ast.hpp"

namespace intentcube::iql {

class ParseError : public Error {
 public:
  ParseError(int line, int column, std::vector<std::string> expected, std::string found);

  int line() const { return line_; }
  int column() const { return column_; }
  // Byte offset into the input.
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

  void set_offset(std::size_t o) { offset_ = o; }

 private:
  int line_;
  int column_;
  std::size_t offset_ = 0;
  std::vector<std::string> expected_;
  std::string found_;
};

Intention parse_intention(std::string_view text);
CubeQuery parse_cube_query(std::string_view text);
Condition parse_condition(std::string_view text);
// An intention (`with ...`) or a cube query (`cube ...`).
Statement parse_statement(std::string_view text);

std::string render(const Intention& i);
std::string render(const CubeQuery& q);
std::string render(const QueryStatement& q);
std::string render(const Statement& s);
std::string render(const Condition& c);

bool is_keyword(std::string_view word);

}  // namespace intentcube::iql
