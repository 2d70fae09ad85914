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

#include "intentcube/highlights/highlights.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "intentcube/error.hpp"
#include "intentcube/models/stats.hpp"

namespace intentcube {

namespace {

template <typename Map>
const typename Map::mapped_type& lookup(std::shared_mutex& mu, const Map& map, const std::string& name,
                                        const char* what) {
  std::shared_lock lock(mu);
  auto it = map.find(name);
  if (it == map.end()) throw PlanError(std::string("unknown ") + what + " function " + name);
  return it->second;
}

template <typename Map, typename F>
void insert(std::shared_mutex& mu, Map& map, std::string name, F f, const char* what) {
  std::unique_lock lock(mu);
  if (!map.emplace(name, std::move(f)).second) {
    throw Error(std::string(what) + " function " + name + " is already registered");
  }
}

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw PlanError("significance argument '" + text + "' is not a number");
  return v;
}

}  // namespace

FunctionRegistry::FunctionRegistry(const FunctionRegistry& other) {
  std::shared_lock lock(other.mu_);
  significance_ = other.significance_;
  delta_ = other.delta_;
  aggregation_ = other.aggregation_;
}

void FunctionRegistry::add_significance(std::string name, SignificanceFn f) {
  insert(mu_, significance_, std::move(name), std::move(f), "significance");
}
void FunctionRegistry::add_delta(std::string name, DeltaFn f) { insert(mu_, delta_, std::move(name), std::move(f), "delta"); }
void FunctionRegistry::add_aggregation(std::string name, AggregationFn f) {
  insert(mu_, aggregation_, std::move(name), std::move(f), "aggregation");
}

const SignificanceFn& FunctionRegistry::significance(const std::string& name) const {
  return lookup(mu_, significance_, name, "significance");
}
const DeltaFn& FunctionRegistry::delta(const std::string& name) const { return lookup(mu_, delta_, name, "delta"); }
const AggregationFn& FunctionRegistry::aggregation(const std::string& name) const {
  return lookup(mu_, aggregation_, name, "aggregation");
}

FunctionRegistry FunctionRegistry::with_defaults() {
  FunctionRegistry r;
  r.add_significance("zscore", [](const Cube& c, const std::string& m, const std::vector<Model>&, const std::string&) {
    auto z = stats::zscores(c.column(m));
    for (auto& v : z) v = std::abs(v);
    return z;
  });
  r.add_significance("measure", [](const Cube& c, const std::string& m, const std::vector<Model>&, const std::string&) {
    return c.column(m);
  });
  r.add_significance("mean", [](const Cube& c, const std::string& m, const std::vector<Model>&, const std::string&) {
    return std::vector<double>(c.size(), stats::mean(c.column(m)));
  });
  r.add_significance("const", [](const Cube& c, const std::string&, const std::vector<Model>&, const std::string& arg) {
    return std::vector<double>(c.size(), arg.empty() ? 0.0 : parse_number(arg));
  });
  r.add_significance("component",
                     [](const Cube& c, const std::string&, const std::vector<Model>& models, const std::string& arg) {
                       for (const auto& model : models) {
                         const auto* mc = model.find(arg);
                         if (!mc) continue;
                         if (mc->kind == ComponentKind::Label) throw PlanError("component " + arg + " is not numeric");
                         if (mc->size() != c.size()) throw ExecutionError("component " + arg + " is not bound to cube " + c.name());
                         return mc->values;
                       }
                       throw PlanError("no model over cube " + c.name() + " has a component " + arg);
                     });
  r.add_delta("abs_diff", [](double fresh, double old) { return std::abs(fresh - old); });
  r.add_delta("diff", [](double fresh, double old) { return fresh - old; });
  r.add_delta("reverse_diff", [](double fresh, double old) { return old - fresh; });
  r.add_aggregation("mean", [](const std::vector<double>& v, std::size_t) { return stats::mean(v); });
  r.add_aggregation("sum", [](const std::vector<double>& v, std::size_t) {
    double s = 0;
    for (double x : v) s += x;
    return s;
  });
  r.add_aggregation("max", [](const std::vector<double>& v, std::size_t) { return *std::max_element(v.begin(), v.end()); });
  r.add_aggregation("min", [](const std::vector<double>& v, std::size_t) { return *std::min_element(v.begin(), v.end()); });
  r.add_aggregation("count_complement", [](const std::vector<double>& v, std::size_t population) {
    double s = 0;
    for (double x : v) s += x;
    return static_cast<double>(population) - s;
  });
  return r;
}

std::vector<double> surprise(const std::vector<double>& sig_new, const std::vector<double>& sig_old,
                             const Proxies& proxies, const DeltaFn& delta) {
  if (proxies.size() != sig_new.size()) throw Error("surprise: proxies do not cover the new cube");
  std::vector<double> out(sig_new.size());
  for (std::size_t i = 0; i < sig_new.size(); ++i) {
    const auto& related = proxies[i];
    if (related.empty()) throw Error("surprise: empty proxy set");
    double s = 0;
    for (auto j : related) s += sig_old.at(j);
    out[i] = delta(sig_new[i], s / static_cast<double>(related.size()));
  }
  return out;
}

double component_score(const ModelComponent& mc, const std::vector<double>& surprises, const AggregationFn& agg) {
  std::vector<double> core;
  for (auto i : mc.core_cells()) core.push_back(surprises.at(i));
  if (core.empty()) return kNoScore;
  return agg(core, surprises.size());
}

Highlight select_highlight(const std::vector<Model>& models, const ScoringPlan& plan, const Cube& old_cube,
                           const Cube& fresh, const Proxies& proxies, const std::string& measure,
                           const FunctionRegistry& functions) {
  for (const auto& m : models) {
    if (!m.cube || m.cube->size() != fresh.size()) {
      throw ExecutionError("model " + m.type + " is not bound to cube " + fresh.name());
    }
  }
  Highlight h;
  h.significance_new = functions.significance(plan.significance_new.name)(fresh, measure, models, plan.significance_new.arg);
  h.significance_old = functions.significance(plan.significance_old.name)(old_cube, measure, {}, plan.significance_old.arg);
  h.surprises = surprise(h.significance_new, h.significance_old, proxies, functions.delta(plan.delta));

  const auto& agg_c = functions.aggregation(plan.component_aggregation);
  const auto& agg_m = functions.aggregation(plan.model_aggregation);
  bool found = false;
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    std::vector<double> scored;
    for (const auto& mc : models[mi].components) {
      if (!mc.candidate) continue;
      ComponentScore cs{mi, mc.name, component_score(mc, h.surprises, agg_c), mc.core_cells().size()};
      if (cs.score != kNoScore) scored.push_back(cs.score);
      if (!found || cs.score > h.score) {
        found = true;
        h.model = mi;
        h.model_type = models[mi].type;
        h.component = mc.name;
        h.score = cs.score;
        h.core_cells = mc.core_cells();
      }
      h.component_scores.push_back(std::move(cs));
    }
    h.model_scores.push_back(scored.empty() ? kNoScore : agg_m(scored, fresh.size()));
  }
  if (!found) throw ExecutionError("nothing to highlight");
  return h;
}

}  // namespace intentcube
