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

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "intentcube/iql/ast.hpp"
#include "intentcube/mdcore/cube.hpp"

namespace intentcube::testing {

// Outcome of a property suite: the first counterexample, if any.
struct Check {
  bool ok = true;
  int cases = 0;
  std::string detail;

  void fail(std::string why) {
    if (ok) detail = std::move(why);
    ok = false;
  }
};

// Random ASTs over identifiers that need quoting, keywords-as-values and
// nested conditions.
struct AstGenerator {
  std::mt19937_64 rng;

  int pick(int n);
  std::string ident();
  std::string value();
  LevelRef level();
  Condition cond(int depth);
  iql::ParamValue param();
  iql::Intention intention();
  CubeQuery query();
};

// A single axis `t` with members 0..n-1 and one cell per member.
std::shared_ptr<const Cube> line_cube(const std::vector<std::vector<double>>& columns,
                                      std::vector<std::string> names = {"m"});

// parse(render(x)) == x for `n` intentions and `n` cube queries.
Check parser_round_trip(int n, std::uint64_t seed);

// Every default model type on `cubes` random cubes; compute() validates the
// data-to-model bijection and each partitioning family.
Check partition_law(int cubes, std::uint64_t seed);

// anc composition and desc as the inverse image of anc, for every pair of
// comparable levels.
Check hierarchy_laws(const Dimension& d);

// eval_cube_query against a string-level group-by over the raw tables, on
// random star schemas.
Check cube_query_oracle(int schemas, std::uint64_t seed);

}  // namespace intentcube::testing
