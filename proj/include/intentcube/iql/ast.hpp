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

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "intentcube/mdcore/query.hpp"

namespace intentcube::iql {

struct ParamValue {
  enum class Kind { Number, String, Ident };

  Kind kind = Kind::Ident;
  std::string text;

  bool operator==(const ParamValue&) const = default;
};

// `type(arg, ..., key=value, ...)`
struct ModelCall {
  std::string type;
  std::vector<std::string> args;
  std::vector<std::pair<std::string, ParamValue>> params;

  const ParamValue* param(std::string_view key) const;
  bool operator==(const ModelCall&) const = default;
};

struct DescribeClause {
  std::vector<LevelRef> by;
  std::optional<int> size;

  bool operator==(const DescribeClause&) const = default;
};

// Each benchmark is a registered name or a numeric constant.
struct AssessClause {
  std::vector<ParamValue> benchmarks;

  bool operator==(const AssessClause&) const = default;
};

struct ExplainClause {
  std::vector<ModelCall> models;
  std::optional<std::string> against;

  bool operator==(const ExplainClause&) const = default;
};

struct PredictClause {
  int k = 1;
  // Level is empty when only the dimension was named.
  LevelRef over;
  std::string model;

  bool operator==(const PredictClause&) const = default;
};

struct SuggestClause {
  std::optional<std::string> recommender;

  bool operator==(const SuggestClause&) const = default;
};

enum class Verb { Describe, Assess, Explain, Predict, Suggest };

const char* to_string(Verb v);

struct Intention {
  std::string cube;
  std::vector<std::string> measures;
  std::optional<Condition> subcube;
  std::variant<DescribeClause, AssessClause, ExplainClause, PredictClause, SuggestClause> clause;
  std::optional<std::string> alias;

  Verb verb() const { return static_cast<Verb>(clause.index()); }
  bool operator==(const Intention&) const = default;
};

struct QueryStatement {
  CubeQuery query;
  std::optional<std::string> alias;

  bool operator==(const QueryStatement&) const = default;
};

using Statement = std::variant<Intention, QueryStatement>;

}  // namespace intentcube::iql
