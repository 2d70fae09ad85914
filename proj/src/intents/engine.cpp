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

#include "intentcube/intents/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <set>

#include "intentcube/error.hpp"
#include "intentcube/iql/parser.hpp"
#include "intentcube/mdcore/proxies.hpp"

namespace intentcube {

namespace {

struct Source {
  std::string name;
  CubePtr cube;
  std::optional<CubeQuery> lineage;
};

struct Acquired {
  CubePtr cube;
  std::optional<CubeQuery> query;
  std::string view;
};

Source resolve(const Catalog& catalog, const Bindings& bindings, const std::string& name) {
  if (auto it = bindings.find(name); it != bindings.end()) return {name, it->second.cube, it->second.lineage};
  if (auto e = catalog.find_cube(name)) return {name, e->cube, e->lineage};
  throw PlanError("unknown cube " + name);
}

// Reuses a registered cube whose lineage is `q`, otherwise evaluates it.
Acquired run_query(const CubeQuery& q, const Catalog& catalog, const Bindings& bindings, const std::string& name) {
  for (const auto& [n, e] : bindings) {
    if (e.lineage && *e.lineage == q) return {e.cube, q, n};
  }
  for (const auto& n : catalog.cube_names()) {
    auto e = catalog.find_cube(n);
    if (e && e->lineage && *e->lineage == q) return {e->cube, q, n};
  }
  if (auto it = bindings.find(q.source); it != bindings.end()) {
    return {std::make_shared<const Cube>(eval_cube_query(*it->second.cube, q, name)), q, {}};
  }
  return {catalog.evaluate(q, name), q, {}};
}

// True when every atom can be checked on the cube's own cells.
bool expressible(const Cube& cube, const Condition& c) {
  if (c.kind == Condition::Kind::Atom) {
    const int a = cube.axis_of(c.ref.dimension);
    if (a < 0 || cube.mixed()) return false;
    const auto& axis = cube.axes()[static_cast<std::size_t>(a)];
    const auto level = axis.dimension->find_level(c.ref.level);
    return !level || axis.dimension->precedes(axis.level, *level);
  }
  return std::all_of(c.children.begin(), c.children.end(), [&](const Condition& x) { return expressible(cube, x); });
}

CubeQuery base_query(const Source& s) {
  if (s.lineage) return *s.lineage;
  if (s.cube->mixed()) throw PlanError("cube " + s.name + " mixes levels and cannot be regrouped");
  CubeQuery q;
  q.source = s.name;
  for (const auto& a : s.cube->axes()) q.group.push_back({a.dimension->name(), a.dimension->level(a.level).name()});
  for (const auto& m : s.cube->measures()) q.aggs.push_back({AggFn::Sum, m});
  return q;
}

Condition conjoin(const Condition& a, const Condition& b) { return a.is_true() ? b : Condition::both(a, b); }

// The source restricted to the filter when the filter fits its levels.
CubePtr restricted(const Source& s, const std::optional<Condition>& filter) {
  if (!filter || !expressible(*s.cube, *filter)) return s.cube;
  return std::make_shared<const Cube>(eval_selection(*s.cube, *filter).renamed(s.cube->name()));
}

Acquired acquire(const Source& s, const std::optional<Condition>& filter,
                 const std::optional<std::vector<LevelRef>>& group, const Catalog& catalog, const Bindings& bindings,
                 const std::string& name) {
  if (!group && (!filter || expressible(*s.cube, *filter))) {
    if (!filter) return {s.cube, std::nullopt, {}};
    return {std::make_shared<const Cube>(eval_selection(*s.cube, *filter).renamed(name)), std::nullopt, {}};
  }
  auto q = base_query(s);
  if (group) q.group = *group;
  if (filter) q.where = conjoin(q.where, *filter);
  return run_query(q, catalog, bindings, name);
}

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : sep) + s;
  return out;
}

std::string render_call(const iql::ModelCall& call) {
  std::vector<std::string> parts = call.args;
  for (const auto& [k, v] : call.params) {
    parts.push_back(k + "=" + (v.kind == iql::ParamValue::Kind::String ? "'" + v.text + "'" : v.text));
  }
  return call.type + "(" + join(parts, ", ") + ")";
}

ScoringPlan plan_of(FunctionRef sig_new, FunctionRef sig_old, std::string delta, std::string agg) {
  ScoringPlan p;
  p.significance_new = std::move(sig_new);
  p.significance_old = std::move(sig_old);
  p.delta = std::move(delta);
  p.component_aggregation = std::move(agg);
  return p;
}

const ScoringPlan kDescribePlan{};
const ScoringPlan kBenchmarkPlan = plan_of({"component", "BenchmarkValue"}, {"measure", {}}, "diff", "count_complement");
const ScoringPlan kKpiPlan = plan_of({"component", "Deviation"}, {"const", "0"}, "diff", "mean");
const ScoringPlan kVariancePlan = plan_of({"measure", {}}, {"mean", {}}, "diff", "count_complement");
const ScoringPlan kSuggestPlan = plan_of({"component", "Score"}, {"const", "0"}, "diff", "max");

// Highlight over a subset of the result's models; indices refer to `all`.
Highlight race(const std::vector<Model>& all, const std::vector<std::size_t>& which, const ScoringPlan& plan,
               const Cube& old_cube, const Cube& fresh, const Proxies& proxies, const std::string& measure,
               const FunctionRegistry& functions) {
  std::vector<Model> subset;
  for (auto i : which) subset.push_back(all[i]);
  Highlight h = select_highlight(subset, plan, old_cube, fresh, proxies, measure, functions);
  h.model = which[h.model];
  for (auto& cs : h.component_scores) cs.model = which[cs.model];
  std::vector<double> scores(all.size(), kNoScore);
  for (std::size_t k = 0; k < which.size(); ++k) scores[which[k]] = h.model_scores[k];
  h.model_scores = std::move(scores);
  return h;
}

std::vector<double> proxy_means(const std::vector<double>& old, const Proxies& p) {
  std::vector<double> out(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    double s = 0;
    for (auto j : p[i]) s += old[j];
    out[i] = s / static_cast<double>(p[i].size());
  }
  return out;
}

// Differences between a model fitted on the new cube and the same model
// fitted on the old one, bound to the new cube.
Model delta_model(const Model& fresh, const Model& old, const Proxies& p) {
  Model m;
  m.type = "delta_" + fresh.type;
  m.measure = fresh.measure;
  m.cube = fresh.cube;
  m.binding = fresh.binding;
  m.binding.emplace_back("against", old.cube->name());
  const std::size_t n = fresh.cube->size();
  std::vector<double> stable(n, 1.0);
  for (const auto& c : fresh.components) {
    const auto* oc = old.find(c.name);
    if (!oc || oc->kind != c.kind) continue;
    if (c.kind == ComponentKind::Numeric) {
      const auto before = proxy_means(oc->values, p);
      std::vector<double> d(n);
      for (std::size_t i = 0; i < n; ++i) d[i] = c.values[i] - before[i];
      m.components.push_back(ModelComponent::numeric("delta_" + c.name, std::move(d)));
      continue;
    }
    std::vector<double> changed(n, 0.0);
    const auto before = c.kind == ComponentKind::Boolean ? proxy_means(oc->values, p) : std::vector<double>();
    for (std::size_t i = 0; i < n; ++i) {
      if (c.kind == ComponentKind::Boolean) {
        changed[i] = (c.values[i] > 0.5) != (before[i] > 0.5) ? 1.0 : 0.0;
      } else {
        changed[i] = c.labels[i] != oc->labels[p[i].front()] ? 1.0 : 0.0;
      }
      if (changed[i] > 0) stable[i] = 0.0;
    }
    m.components.push_back(ModelComponent::bitmap("Changed_" + c.name, std::move(changed), "changes", false));
  }
  m.components.push_back(ModelComponent::bitmap("Stable", std::move(stable), "changes", false));
  for (const auto& [k, v] : fresh.characterization) {
    if (auto it = old.characterization.find(k); it != old.characterization.end()) {
      m.characterization["delta_" + k] = v - it->second;
    }
  }
  m.validate();
  return m;
}

std::string kpi_rules_text(const std::vector<KpiRule>& rules) {
  std::vector<std::string> parts;
  auto bound = [](double v) { return std::isinf(v) ? std::string() : format_number(v); };
  for (const auto& r : rules) parts.push_back(r.label + ":" + bound(r.lo) + ":" + bound(r.hi));
  return join(parts, ";");
}

std::vector<int> covers(const Dimension& d, int level, bool upward) {
  std::vector<int> out;
  const int n = static_cast<int>(d.level_count());
  for (int u = 0; u < n; ++u) {
    if (u == level) continue;
    const bool related = upward ? d.precedes(level, u) : d.precedes(u, level);
    if (!related) continue;
    bool immediate = true;
    for (int w = 0; w < n && immediate; ++w) {
      if (w == level || w == u) continue;
      immediate = upward ? !(d.precedes(level, w) && d.precedes(w, u)) : !(d.precedes(u, w) && d.precedes(w, level));
    }
    if (immediate) out.push_back(u);
  }
  return out;
}

class Run {
 public:
  Run(const Engine& engine, const std::string& text, Bindings& bindings, std::size_t sequence)
      : engine_(engine), catalog_(engine.catalog()), bindings_(bindings), text_(text), sequence_(sequence) {}

  EnhancedCube query(const iql::QueryStatement& s) {
    EnhancedCube out = start("query", s.alias);
    auto got = run_query(s.query, catalog_, bindings_, out.name);
    out.cube = got.cube;
    out.provenance.query = s.query;
    out.provenance.view = got.view;
    return finish(std::move(out), s.alias);
  }

  EnhancedCube intention(const iql::Intention& in) {
    EnhancedCube out = start(iql::to_string(in.verb()), in.alias);
    out.provenance.filter = in.subcube;
    const Source src = resolve(catalog_, bindings_, in.cube);
    source_lineage_ = src.lineage;
    switch (in.verb()) {
      case iql::Verb::Describe: describe(in, src, std::get<iql::DescribeClause>(in.clause), out); break;
      case iql::Verb::Assess: assess(in, src, std::get<iql::AssessClause>(in.clause), out); break;
      case iql::Verb::Explain: explain(in, src, std::get<iql::ExplainClause>(in.clause), out); break;
      case iql::Verb::Predict: predict(in, src, std::get<iql::PredictClause>(in.clause), out); break;
      case iql::Verb::Suggest: suggest(in, src, std::get<iql::SuggestClause>(in.clause), out); break;
    }
    return finish(std::move(out), in.alias);
  }

 private:
  EnhancedCube start(const std::string& verb, const std::optional<std::string>& alias) {
    EnhancedCube out;
    out.name = alias ? *alias : verb + "_" + std::to_string(sequence_);
    out.provenance.text = text_;
    out.provenance.verb = verb;
    return out;
  }

  EnhancedCube finish(EnhancedCube out, const std::optional<std::string>& alias) {
    if (alias) {
      if (catalog_.find_cube(*alias) || catalog_.find_benchmark(*alias)) {
        throw PlanError("name " + *alias + " is already registered in the catalog");
      }
      if (bindings_.count(*alias)) throw PlanError("name " + *alias + " is already used in this session");
      // Extended and mixed cubes are no query result.
      std::optional<CubeQuery> lineage;
      if (out.provenance.verb != "predict" && !out.cube->mixed()) {
        lineage = out.provenance.query ? out.provenance.query : out.provenance.filter ? std::nullopt : source_lineage_;
      }
      bindings_[*alias] = Catalog::CubeEntry{out.cube, lineage};
    }
    for (const auto& m : out.models) {
      for (const auto& w : m.warnings) out.warnings.push_back(m.type + ": " + w);
    }
    return out;
  }

  void take(EnhancedCube& out, const Acquired& got) {
    out.cube = got.cube;
    out.provenance.query = got.query;
    out.provenance.view = got.view;
  }

  Model compute(const std::string& type, CubePtr cube, const std::string& measure, std::vector<std::string> args,
                std::map<std::string, std::string> params, CubePtr reference = nullptr) {
    const auto& t = engine_.models().get(type);
    ModelRequest req;
    req.cube = std::move(cube);
    req.measure = measure;
    req.args = std::move(args);
    req.params = std::move(params);
    req.reference = std::move(reference);
    req.seed = engine_.options().seed;
    return t.compute(req);
  }

  void check_measures(const iql::Intention& in, const Cube& cube) {
    for (const auto& m : in.measures) cube.measure_index(m);
  }

  void describe(const iql::Intention& in, const Source& src, const iql::DescribeClause& c, EnhancedCube& out) {
    std::optional<std::vector<LevelRef>> group;
    if (!c.by.empty()) {
      group = base_query(src).group;
      for (const auto& ref : c.by) {
        catalog_.dimension(ref.dimension)->level_index(ref.level);
        auto it = std::find_if(group->begin(), group->end(),
                               [&](const LevelRef& g) { return g.dimension == ref.dimension; });
        if (it != group->end()) {
          *it = ref;
        } else {
          group->push_back(ref);
        }
      }
    }
    take(out, acquire(src, in.subcube, group, catalog_, bindings_, out.name));
    check_measures(in, *out.cube);
    const auto old = restricted(src, in.subcube);
    out.provenance.old_cube = src.name;
    const auto p = proxies(*old, *out.cube);

    if (c.size) {
      out.models.push_back(compute("kmeans", out.cube, in.measures.front(), {std::to_string(*c.size)},
                                   {{"measures", join(in.measures, ",")}}));
      out.provenance.model_calls.push_back("kmeans(" + std::to_string(*c.size) + ")");
      out.highlights.push_back(race(out.models, {0}, kDescribePlan, *old, *out.cube, p, in.measures.front(),
                                    engine_.functions()));
      out.provenance.scoring.push_back(kDescribePlan);
      return;
    }
    out.provenance.model_calls = {"topk(5)", "outliers(2)"};
    for (const auto& m : in.measures) {
      const auto first = out.models.size();
      out.models.push_back(compute("topk", out.cube, m, {"5"}, {}));
      out.models.push_back(compute("outliers", out.cube, m, {"2"}, {}));
      out.highlights.push_back(
          race(out.models, {first, first + 1}, kDescribePlan, *old, *out.cube, p, m, engine_.functions()));
      out.provenance.scoring.push_back(kDescribePlan);
    }
  }

  void assess(const iql::Intention& in, const Source& src, const iql::AssessClause& c, EnhancedCube& out) {
    take(out, acquire(src, in.subcube, std::nullopt, catalog_, bindings_, out.name));
    check_measures(in, *out.cube);
    out.provenance.old_cube = src.name;
    const auto p = identity_proxies(out.cube->size());
    for (const auto& m : in.measures) {
      for (const auto& b : c.benchmarks) {
        ScoringPlan plan = kBenchmarkPlan;
        Model model;
        if (b.kind == iql::ParamValue::Kind::Number) {
          model = compute("benchmark", out.cube, m, {}, {{"value", b.text}});
          out.provenance.model_calls.push_back("benchmark(" + b.text + ")");
        } else if (auto kpi = engine_.find_kpi(b.text)) {
          std::map<std::string, std::string> params{{"rules", kpi_rules_text(kpi->rules)}};
          if (kpi->target) params["target"] = *kpi->target;
          model = compute("kpi", out.cube, m, {}, params);
          model.binding.emplace_back("kpi", kpi->name);
          plan = kKpiPlan;
          out.provenance.model_calls.push_back("kpi(" + kpi->name + ")");
        } else {
          CubePtr reference;
          if (auto q = catalog_.find_benchmark(b.text)) {
            reference = run_query(*q, catalog_, bindings_, b.text).cube;
          } else {
            reference = resolve(catalog_, bindings_, b.text).cube;
          }
          model = compute("benchmark", out.cube, m, {}, {}, reference);
          out.provenance.model_calls.push_back("benchmark(" + b.text + ")");
        }
        out.models.push_back(std::move(model));
        out.highlights.push_back(
            race(out.models, {out.models.size() - 1}, plan, *out.cube, *out.cube, p, m, engine_.functions()));
        out.provenance.scoring.push_back(plan);
      }
    }
  }

  void explain(const iql::Intention& in, const Source& src, const iql::ExplainClause& c, EnhancedCube& out) {
    take(out, acquire(src, in.subcube, std::nullopt, catalog_, bindings_, out.name));
    check_measures(in, *out.cube);
    const auto& measure = in.measures.front();
    const Source against = c.against ? resolve(catalog_, bindings_, *c.against) : src;
    const auto old = restricted(against, in.subcube);
    out.provenance.old_cube = against.name;
    const auto p = proxies(*old, *out.cube);
    const auto identity = identity_proxies(out.cube->size());

    for (const auto& call : c.models) {
      std::map<std::string, std::string> params;
      for (const auto& [k, v] : call.params) params[k] = v.text;
      const auto& type = engine_.models().get(call.type);
      out.provenance.model_calls.push_back(render_call(call));
      Model model;
      ScoringPlan plan = kDescribePlan;
      const Proxies* used = &p;
      const Cube* reference = old.get();
      if (c.against && !type.needs_reference) {
        const auto fresh = compute(call.type, out.cube, measure, call.args, params, old);
        const auto before = compute(call.type, old, measure, call.args, params, old);
        model = delta_model(fresh, before, p);
      } else {
        model = compute(call.type, out.cube, measure, call.args, params, old);
        if (type.needs_reference) {
          plan = kVariancePlan;
        } else if (model.type == "correlation" || model.type == "regression") {
          plan = plan_of({"component", model.type == "correlation" ? "Participation" : "Discrepancy"}, {"const", "0"},
                         "abs_diff", "mean");
          used = &identity;
          reference = out.cube.get();
        }
      }
      out.models.push_back(std::move(model));
      out.highlights.push_back(race(out.models, {out.models.size() - 1}, plan, *reference, *out.cube, *used, measure,
                                    engine_.functions()));
      out.provenance.scoring.push_back(plan);
    }
  }

  void predict(const iql::Intention& in, const Source& src, const iql::PredictClause& c, EnhancedCube& out) {
    auto got = acquire(src, in.subcube, std::nullopt, catalog_, bindings_, out.name);
    check_measures(in, *got.cube);
    out.provenance.query = got.query;
    out.provenance.view = got.view;
    out.provenance.old_cube = src.name;
    const std::string time = c.over.level.empty() ? c.over.dimension : c.over.str();
    Model model = compute(c.model, got.cube, in.measures.front(), {}, {{"time", time}, {"k", std::to_string(c.k)}});
    const auto* predicted = model.find("Predicted");
    if (!predicted) throw PlanError("model " + c.model + " does not predict cells");
    out.provenance.model_calls.push_back(c.model + "(time=" + time + ", k=" + std::to_string(c.k) + ")");
    out.cube = model.cube;

    Highlight h;
    h.model = 0;
    h.model_type = model.type;
    h.component = predicted->name;
    h.core_cells = predicted->core_cells();
    h.score = std::numeric_limits<double>::quiet_NaN();
    h.model_scores = {h.score};
    h.component_scores.push_back({0, predicted->name, h.score, h.core_cells.size()});
    out.models.push_back(std::move(model));
    out.highlights.push_back(std::move(h));
  }

  void suggest(const iql::Intention& in, const Source& src, const iql::SuggestClause& c, EnhancedCube& out) {
    if (c.recommender && *c.recommender != "inform") throw PlanError("unknown recommender " + *c.recommender);
    const auto q0 = base_query(src);
    const Source base = src.lineage ? resolve(catalog_, bindings_, src.lineage->source) : src;
    if (!in.measures.empty()) check_measures(in, *src.cube);
    if (src.cube->measures().empty()) throw PlanError("cube " + src.name + " has no measure");
    const std::string measure = in.measures.empty() ? src.cube->measures().front() : in.measures.front();

    std::vector<CubeQuery> queries;
    auto offer = [&](CubeQuery q) {
      if (q == q0 || std::find(queries.begin(), queries.end(), q) != queries.end()) return;
      if (static_cast<int>(queries.size()) < engine_.options().max_candidates) queries.push_back(std::move(q));
    };
    for (const auto& axis : base.cube->axes()) {
      const auto& d = *axis.dimension;
      auto it = std::find_if(q0.group.begin(), q0.group.end(), [&](const LevelRef& g) { return g.dimension == d.name(); });
      const int current = it == q0.group.end() ? d.top() : d.level_index(it->level);
      const auto pos = it - q0.group.begin();
      for (int u : covers(d, current, true)) {
        CubeQuery q = q0;
        if (u == d.top()) {
          q.group.erase(q.group.begin() + pos);
        } else {
          q.group[static_cast<std::size_t>(pos)].level = d.level(u).name();
        }
        offer(std::move(q));
      }
      for (int l : covers(d, current, false)) {
        if (!d.precedes(axis.level, l)) continue;
        CubeQuery q = q0;
        if (current == d.top()) {
          q.group.push_back({d.name(), d.level(l).name()});
        } else {
          q.group[static_cast<std::size_t>(pos)].level = d.level(l).name();
        }
        offer(std::move(q));
      }
    }
    if (queries.empty()) throw ExecutionError("cube " + src.name + " has no neighbouring grouping to suggest");

    std::vector<CubePtr> candidates;
    std::vector<std::string> descriptions;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      candidates.push_back(run_query(queries[i], catalog_, bindings_, "candidate_" + std::to_string(i + 1)).cube);
      descriptions.push_back(iql::render(queries[i]));
    }
    Model model = inform(candidates, descriptions, measure);
    model.validate();
    out.cube = model.cube;
    out.provenance.old_cube = src.name;
    out.provenance.model_calls.push_back("inform");
    out.models.push_back(std::move(model));
    const auto p = proxies(*src.cube, *out.cube);
    out.highlights.push_back(race(out.models, {0}, kSuggestPlan, *src.cube, *out.cube, p, measure, engine_.functions()));
    out.provenance.scoring.push_back(kSuggestPlan);
  }

  const Engine& engine_;
  Catalog& catalog_;
  Bindings& bindings_;
  const std::string& text_;
  std::size_t sequence_;
  std::optional<CubeQuery> source_lineage_;
};

}  // namespace

Engine::Engine(std::shared_ptr<Catalog> catalog, ModelRegistry models, FunctionRegistry functions,
               EngineOptions options)
    : catalog_(std::move(catalog)), models_(models), functions_(functions), options_(options) {
  if (!catalog_) catalog_ = std::make_shared<Catalog>();
}

void Engine::add_kpi(KpiDefinition kpi) {
  if (kpi.rules.empty()) throw PlanError("kpi " + kpi.name + " has no rules");
  std::unique_lock lock(mu_);
  if (!kpis_.emplace(kpi.name, kpi).second) throw PlanError("kpi " + kpi.name + " is already registered");
}

std::optional<KpiDefinition> Engine::find_kpi(std::string_view name) const {
  std::shared_lock lock(mu_);
  auto it = kpis_.find(name);
  if (it == kpis_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Engine::kpi_names() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& [k, v] : kpis_) out.push_back(k);
  return out;
}

EnhancedCube Engine::execute(const iql::Statement& statement, const std::string& text, Bindings& bindings,
                             std::size_t sequence) const {
  Run run(*this, text, bindings, sequence);
  if (const auto* q = std::get_if<iql::QueryStatement>(&statement)) return run.query(*q);
  return run.intention(std::get<iql::Intention>(statement));
}

EnhancedCube Engine::submit(const std::string& text, Bindings& bindings, std::size_t sequence) const {
  return execute(iql::parse_statement(text), text, bindings, sequence);
}

std::uint64_t seed_from_environment() {
  const char* v = std::getenv("ENGINE_SEED");
  if (!v || !*v) return 42;
  char* end = nullptr;
  const auto seed = std::strtoull(v, &end, 10);
  return *end == '\0' ? seed : 42;
}

}  // namespace intentcube
