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

#include <boost/algorithm/string.hpp>

#include "intentcube/error.hpp"
#include "intentcube/models/algorithms.hpp"

namespace intentcube {

namespace {

// Positional arguments fill the declared inputs in order; a keyword wins.
ModelRequest positional(const ModelRequest& req, const std::vector<std::string>& inputs, const std::string& type) {
  ModelRequest out = req;
  if (req.args.size() > inputs.size()) {
    throw PlanError("model " + type + " takes at most " + std::to_string(inputs.size()) + " positional arguments");
  }
  for (std::size_t i = 0; i < req.args.size(); ++i) out.params.try_emplace(inputs[i], req.args[i]);
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  if (text.empty()) return parts;
  boost::split(parts, text, boost::is_any_of(",;"));
  for (auto& p : parts) boost::trim(p);
  return parts;
}

std::string required(const ModelRequest& req, const std::string& key, const std::string& type) {
  auto v = req.text(key, "");
  if (v.empty()) throw PlanError("model " + type + " needs parameter " + key);
  return v;
}

const Cube& reference(const ModelRequest& req, const std::string& type) {
  if (!req.reference) throw PlanError("model " + type + " needs a reference cube");
  return *req.reference;
}

void define(ModelRegistry& r, std::string name, std::vector<std::string> inputs, std::vector<std::string> outputs,
         bool needs_reference, std::function<Model(const ModelRequest&)> body) {
  ModelType t;
  t.name = name;
  t.inputs = inputs;
  t.outputs = std::move(outputs);
  t.needs_reference = needs_reference;
  t.compute = [name, inputs, body = std::move(body)](const ModelRequest& req) {
    Model m = body(positional(req, inputs, name));
    m.validate();
    return m;
  };
  r.add(std::move(t));
}

}  // namespace

ModelRegistry ModelRegistry::with_defaults() {
  ModelRegistry r;
  define(r, "topk", {"k"}, {"Rank", "Top-k", "Non-top-k"}, false,
      [](const ModelRequest& q) { return topk(q.cube, q.measure, q.integer("k", 5)); });
  define(r, "outliers", {"threshold"}, {"Outlierness", "Outliers", "Non-outliers"}, false,
      [](const ModelRequest& q) { return outliers(q.cube, q.measure, q.number("threshold", 2.0)); });
  define(r, "kmeans", {"k", "measures"}, {"Cluster_i", "Representative"}, false, [](const ModelRequest& q) {
    auto measures = split_list(q.text("measures", ""));
    if (measures.empty()) measures = {q.measure};
    return kmeans(q.cube, measures, q.integer("k", 3), q.seed);
  });
  define(r, "kpi", {"rules", "target"}, {"Assessment", "Deviation"}, false, [](const ModelRequest& q) {
    auto target = q.text("target", "");
    return kpi(q.cube, q.measure, parse_kpi_rules(required(q, "rules", "kpi")),
               target.empty() ? std::nullopt : std::optional<std::string>(target));
  });
  define(r, "benchmark", {"value"}, {"BenchmarkValue", "Discrepancy", "MC-", "MC+"}, false, [](const ModelRequest& q) {
    if (q.params.count("value")) return benchmark_constant(q.cube, q.measure, q.number("value", 0));
    return benchmark_discrepancy(q.cube, q.measure, reference(q, "benchmark"), reference(q, "benchmark").name());
  });
  define(r, "variance_test", {"level"}, {"Fstat", "Discrepancy", "AboveStdev", "BelowStdev"}, true,
      [](const ModelRequest& q) {
        Model m = variance_test(q.cube, reference(q, "variance_test"), q.measure);
        if (auto level = q.text("level", ""); !level.empty()) m.binding.emplace_back("level", level);
        return m;
      });
  define(r, "ts_decompose", {"time", "window", "period"}, {"Trend", "Seasonality", "Noise"}, false,
      [](const ModelRequest& q) {
        return ts_decompose(q.cube, q.measure, required(q, "time", "ts_decompose"), q.integer("window", 5),
                            q.integer("period", 0));
      });
  define(r, "ar_predict", {"time", "k", "order", "window"}, {"Known", "Predicted", "Trend"}, false,
      [](const ModelRequest& q) {
        return ar_predict(q.cube, q.measure, required(q, "time", "ar_predict"), q.integer("k", 1),
                          q.integer("order", 2), q.integer("window", 5));
      });
  define(r, "correlation", {"attribute", "threshold"}, {"Participation", "Participating", "Non-participating"}, false,
      [](const ModelRequest& q) {
        return correlation(q.cube, q.measure, required(q, "attribute", "correlation"), q.number("threshold", 0.05));
      });
  define(r, "regression", {"attributes", "threshold"}, {"Expected", "Discrepancy", "Above", "Below"}, false,
      [](const ModelRequest& q) {
        auto attributes = split_list(required(q, "attributes", "regression"));
        return regression(q.cube, q.measure, attributes, q.number("threshold", 1.0));
      });
  // Short names accepted in intentions.
  for (auto [alias, target] : {std::pair{"ftest", "variance_test"}, std::pair{"ar", "ar_predict"}}) {
    ModelType t = r.get(target);
    t.name = alias;
    r.add(std::move(t));
  }
  return r;
}

}  // namespace intentcube
