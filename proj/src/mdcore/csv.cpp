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

#include "intentcube/mdcore/csv.hpp"

#include <fmt/format.h>

#include <boost/tokenizer.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

#include "intentcube/error.hpp"

namespace intentcube {

namespace {

std::vector<std::string> split_line(const std::string& line, std::size_t line_no) {
  using Sep = boost::escaped_list_separator<char>;
  // No escape character: a backslash is an ordinary byte in member names.
  boost::tokenizer<Sep> tok(line, Sep("", ",", "\""));
  std::vector<std::string> out;
  try {
    for (const auto& field : tok) out.push_back(field);
  } catch (const boost::escaped_list_error& e) {
    throw Error("csv line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto fields = split_line(line, line_no);
    if (header) {
      table.header = std::move(fields);
      header = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

std::string to_csv(const Cube& cube) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::string out;
  bool first = true;
  for (const auto& a : cube.axes()) {
    out += (first ? "" : ",") + quote(a.qualified());
    first = false;
  }
  for (const auto& m : cube.measures()) {
    out += (first ? "" : ",") + quote(m);
    first = false;
  }
  out += "\n";
  for (std::size_t i = 0; i < cube.size(); ++i) {
    first = true;
    for (std::size_t a = 0; a < cube.axes().size(); ++a) {
      out += (first ? "" : ",") + quote(cube.label(i, a));
      first = false;
    }
    for (double v : cube.cell(i).measures) {
      out += (first ? "" : ",") + format_number(v);
      first = false;
    }
    out += "\n";
  }
  return out;
}

}  // namespace intentcube
