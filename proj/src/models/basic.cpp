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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "intentcube/error.hpp"
#include "intentcube/mdcore/csv.hpp"
#include "intentcube/mdcore/extend.hpp"
#include "intentcube/models/algorithms.hpp"
#include "intentcube/models/stats.hpp"

namespace intentcube {

namespace {

std::string cell_key(const Cube& cube, std::size_t i) {
  std::string key = "(";
  for (std::size_t a = 0; a < cube.axes().size(); ++a) key += (a ? ", " : "") + cube.label(i, a);
  return key + ")";
}

Model base_model(std::string type, CubePtr cube, const std::string& measure) {
  if (!cube) throw PlanError("model " + type + " needs a cube");
  Model m;
  m.type = std::move(type);
  m.measure = measure;
  m.cube = std::move(cube);
  m.binding.emplace_back("measure", measure);
  return m;
}

}  // namespace

std::vector<double> attribute_column(const Cube& cube, const std::string& attribute) {
  if (cube.find_measure(attribute)) return cube.column(attribute);
  return bound_column(cube, BoundInput::property(attribute));
}

Model topk(CubePtr cube, const std::string& measure, int k) {
  Model m = base_model("topk", cube, measure);
  if (k < 1) throw PlanError("topk needs k >= 1");
  const auto v = cube->column(measure);
  const int n = static_cast<int>(v.size());
  if (k > n) {
    m.warnings.push_back("k = " + std::to_string(k) + " exceeds the " + std::to_string(n) + " cells; clamped");
    k = n;
  }
  m.binding.emplace_back("k", std::to_string(k));
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  std::vector<double> rank(v.size()), top(v.size()), rest(v.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    rank[order[r]] = static_cast<double>(r + 1);
    const bool in = static_cast<int>(r) < k;
    top[order[r]] = in ? 1.0 : 0.0;
    rest[order[r]] = in ? 0.0 : 1.0;
  }
  const auto suffix = std::to_string(k);
  m.components.push_back(ModelComponent::numeric("Rank", std::move(rank)));
  m.components.push_back(ModelComponent::bitmap("Top-" + suffix, std::move(top), "topk"));
  m.components.push_back(ModelComponent::bitmap("Non-top-" + suffix, std::move(rest), "topk"));
  m.characterization["k"] = k;
  return m;
}

Model outliers(CubePtr cube, const std::string& measure, double threshold) {
  Model m = base_model("outliers", cube, measure);
  m.binding.emplace_back("threshold", format_number(threshold));
  const auto v = cube->column(measure);
  if (v.size() < 2) throw ExecutionError("outliers needs at least 2 cells, cube " + cube->name() + " has " + std::to_string(v.size()));
  auto z = stats::zscores(v);
  std::vector<double> out(v.size()), in(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::abs(z[i]) > threshold ? 1.0 : 0.0;
    in[i] = 1.0 - out[i];
  }
  m.components.push_back(ModelComponent::numeric("Outlierness", std::move(z)));
  m.components.push_back(ModelComponent::bitmap("Outliers", std::move(out), "outliers"));
  m.components.push_back(ModelComponent::bitmap("Non-outliers", std::move(in), "outliers"));
  m.characterization["mean"] = stats::mean(v);
  m.characterization["stdev"] = stats::stdev(v);
  m.characterization["threshold"] = threshold;
  return m;
}

Model kmeans(CubePtr cube, const std::vector<std::string>& measures, int k, std::uint64_t seed) {
  if (measures.empty()) throw PlanError("kmeans needs at least one measure");
  Model m = base_model("kmeans", cube, measures.front());
  for (std::size_t i = 1; i < measures.size(); ++i) m.binding.emplace_back("measure", measures[i]);
  m.binding.emplace_back("k", std::to_string(k));
  m.binding.emplace_back("seed", std::to_string(seed));
  const std::size_t n = cube->size();
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw PlanError("kmeans needs 1 <= k <= " + std::to_string(n) + ", got " + std::to_string(k));
  }
  const std::size_t d = measures.size();
  std::vector<std::vector<double>> cols;
  for (const auto& name : measures) cols.push_back(cube->column(name));
  auto dist2 = [&](std::size_t i, const std::vector<double>& c) {
    double s = 0;
    for (std::size_t j = 0; j < d; ++j) s += (cols[j][i] - c[j]) * (cols[j][i] - c[j]);
    return s;
  };
  auto dist_between = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t j = 0; j < d; ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return s;
  };
  auto point = [&](std::size_t i) {
    std::vector<double> p(d);
    for (std::size_t j = 0; j < d; ++j) p[j] = cols[j][i];
    return p;
  };

  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> centroids;
  std::vector<std::size_t> seeds{static_cast<std::size_t>(rng() % n)};
  centroids.push_back(point(seeds[0]));
  while (centroids.size() < static_cast<std::size_t>(k)) {
    std::size_t best = 0;
    double best_d = -1;
    for (std::size_t i = 0; i < n; ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& c : centroids) nearest = std::min(nearest, dist2(i, c));
      if (nearest > best_d && std::find(seeds.begin(), seeds.end(), i) == seeds.end()) {
        best_d = nearest;
        best = i;
      }
    }
    seeds.push_back(best);
    centroids.push_back(point(best));
  }

  std::vector<std::size_t> assign(n, 0);
  int iterations = 0;
  for (; iterations < 100; ++iterations) {
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double dd = dist2(i, centroids[c]);
        if (dd < best) {
          best = dd;
          assign[i] = c;
        }
      }
    }
    std::vector<std::size_t> counts(centroids.size(), 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[assign[i]];
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] > 0) continue;
      // Reseed from the point farthest from its centroid, taken from a cluster that keeps a member.
      std::size_t far = n;
      double far_d = -1;
      for (std::size_t i = 0; i < n; ++i) {
        const double dd = dist2(i, centroids[assign[i]]);
        if (counts[assign[i]] > 1 && dd > far_d) {
          far_d = dd;
          far = i;
        }
      }
      --counts[assign[far]];
      assign[far] = c;
      counts[c] = 1;
      m.warnings.push_back("empty cluster reseeded at iteration " + std::to_string(iterations + 1));
    }
    std::vector<std::vector<double>> next(centroids.size(), std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) next[assign[i]][j] += cols[j][i];
    }
    double shift = 0;
    for (std::size_t c = 0; c < next.size(); ++c) {
      for (auto& x : next[c]) x /= static_cast<double>(counts[c]);
      shift = std::max(shift, std::sqrt(dist_between(next[c], centroids[c])));
    }
    centroids = std::move(next);
    if (shift <= 1e-9) {
      ++iterations;
      break;
    }
  }
  double inertia = 0;
  for (std::size_t i = 0; i < n; ++i) inertia += dist2(i, centroids[assign[i]]);

  std::vector<double> representative(n, 0.0);
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    std::vector<double> bits(n, 0.0);
    std::size_t medoid = n;
    double medoid_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (assign[i] != c) continue;
      bits[i] = 1.0;
      const double dd = dist2(i, centroids[c]);
      if (dd < medoid_d) {
        medoid_d = dd;
        medoid = i;
      }
    }
    if (medoid < n) representative[medoid] = 1.0;
    m.components.push_back(ModelComponent::bitmap("Cluster_" + std::to_string(c + 1), std::move(bits), "clusters"));
  }
  auto rep = ModelComponent::bitmap("Representative", std::move(representative), "representative", false);
  rep.candidate = false;
  m.components.push_back(std::move(rep));
  m.characterization["inertia"] = inertia;
  m.characterization["iterations"] = iterations;
  m.characterization["k"] = k;
  return m;
}

std::vector<KpiRule> parse_kpi_rules(std::string_view text) {
  // label:lo:hi entries separated by ';' or ','; an empty or `inf` bound is open.
  std::vector<KpiRule> rules;
  std::string item;
  std::istringstream in{std::string(text)};
  auto parse_bound = [&](const std::string& s, double open) {
    if (s.empty() || s == "inf" || s == "+inf" || s == "-inf") return open;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || used == 0) throw PlanError("kpi rule bound '" + s + "' is not a number");
    return v;
  };
  while (std::getline(in, item, ';')) {
    std::istringstream parts(item);
    std::string label, lo, hi;
    std::getline(parts, label, ':');
    std::getline(parts, lo, ':');
    std::getline(parts, hi, ':');
    if (label.empty()) continue;
    rules.push_back({parse_bound(lo, -std::numeric_limits<double>::infinity()),
                     parse_bound(hi, std::numeric_limits<double>::infinity()), label});
  }
  return rules;
}

Model kpi(CubePtr cube, const std::string& measure, std::vector<KpiRule> rules, std::optional<std::string> target) {
  Model m = base_model("kpi", cube, measure);
  if (rules.empty()) throw PlanError("kpi needs at least one rule");
  std::vector<std::string> labels;
  for (const auto& r : rules) {
    if (!(r.lo < r.hi)) throw PlanError("kpi rule " + r.label + " has an empty interval");
    if (std::find(labels.begin(), labels.end(), r.label) == labels.end()) labels.push_back(r.label);
  }
  auto sorted = rules;
  std::sort(sorted.begin(), sorted.end(), [](const KpiRule& a, const KpiRule& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].lo < sorted[i - 1].hi) {
      throw PlanError("kpi rules " + sorted[i - 1].label + " and " + sorted[i].label + " overlap");
    }
  }
  for (const auto& r : rules) {
    m.binding.emplace_back(r.label, "[" + format_number(r.lo) + ", " + format_number(r.hi) + ")");
  }

  const auto v = cube->column(measure);
  std::vector<std::string> assessment(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto it = std::find_if(rules.begin(), rules.end(), [&](const KpiRule& r) { return r.lo <= v[i] && v[i] < r.hi; });
    if (it == rules.end()) {
      throw ExecutionError("kpi: value " + format_number(v[i]) + " of cell " + cell_key(*cube, i) + " is not covered by any rule");
    }
    assessment[i] = it->label;
  }
  if (!target) {
    std::size_t best = 0;
    for (const auto& l : labels) {
      const auto c = static_cast<std::size_t>(std::count(assessment.begin(), assessment.end(), l));
      if (c > best) {
        best = c;
        target = l;
      }
    }
  } else if (std::find(labels.begin(), labels.end(), *target) == labels.end()) {
    throw PlanError("kpi target " + *target + " is not a rule label");
  }
  m.binding.emplace_back("target", *target);

  std::vector<double> deviation(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) deviation[i] = assessment[i] == *target ? 0.0 : 1.0;
  m.components.push_back(ModelComponent::label("Assessment", assessment));
  for (const auto& l : labels) {
    std::vector<double> bits(v.size());
    double count = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      bits[i] = assessment[i] == l ? 1.0 : 0.0;
      count += bits[i];
    }
    m.characterization["count_" + l] = count;
    m.components.push_back(ModelComponent::bitmap(l, std::move(bits), "kpi"));
  }
  m.components.push_back(ModelComponent::numeric("Deviation", std::move(deviation)));
  return m;
}

namespace {

Model discrepancy_model(Model m, std::vector<double> bench) {
  const auto v = m.cube->column(m.measure);
  std::vector<double> disc(v.size()), minus(v.size()), plus(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    disc[i] = v[i] - bench[i];
    plus[i] = disc[i] > 0 ? 1.0 : 0.0;
    minus[i] = 1.0 - plus[i];
  }
  m.components.push_back(ModelComponent::numeric("BenchmarkValue", std::move(bench)));
  m.components.push_back(ModelComponent::numeric("Discrepancy", std::move(disc)));
  m.components.push_back(ModelComponent::bitmap("MC-", std::move(minus), "benchmark"));
  m.components.push_back(ModelComponent::bitmap("MC+", std::move(plus), "benchmark"));
  return m;
}

}  // namespace

Model benchmark_discrepancy(CubePtr cube, const std::string& measure, const Cube& benchmark,
                            const std::string& benchmark_name) {
  Model m = base_model("benchmark", cube, measure);
  m.binding.emplace_back("benchmark", benchmark_name);
  cube->measure_index(measure);

  std::string bench_measure = measure;
  if (!benchmark.find_measure(measure)) {
    if (benchmark.measures().size() != 1) {
      throw PlanError("benchmark " + benchmark_name + " has no measure " + measure);
    }
    bench_measure = benchmark.measures().front();
  }
  const auto bm = static_cast<std::size_t>(benchmark.measure_index(bench_measure));

  // Map each benchmark axis to a cube axis or to its single fixed member.
  std::vector<int> source(benchmark.axes().size(), -1);
  std::vector<Member> fixed(benchmark.axes().size());
  for (std::size_t b = 0; b < benchmark.axes().size(); ++b) {
    const auto& axis = benchmark.axes()[b];
    const int a = cube->axis_of(axis.dimension->name());
    if (a >= 0) {
      if (cube->axes()[static_cast<std::size_t>(a)].level != axis.level) {
        throw PlanError("benchmark " + benchmark_name + " is grouped at " + axis.qualified() + " but the cube at " +
                        cube->axes()[static_cast<std::size_t>(a)].qualified());
      }
      source[b] = a;
      continue;
    }
    std::set<Member> members;
    for (const auto& c : benchmark.cells()) members.insert(c.coords[b]);
    if (members.size() > 1) {
      throw PlanError("benchmark " + benchmark_name + " varies along " + axis.qualified() + ", which the cube does not have");
    }
    if (!members.empty()) fixed[b] = *members.begin();
  }
  for (const auto& axis : cube->axes()) {
    if (benchmark.axis_of(axis.dimension->name()) < 0) {
      throw PlanError("benchmark " + benchmark_name + " has no dimension " + axis.dimension->name());
    }
  }

  std::vector<double> bench(cube->size());
  for (std::size_t i = 0; i < cube->size(); ++i) {
    std::vector<Member> key(benchmark.axes().size());
    for (std::size_t b = 0; b < key.size(); ++b) {
      key[b] = source[b] >= 0 ? cube->cell(i).coords[static_cast<std::size_t>(source[b])] : fixed[b];
    }
    auto j = benchmark.find(key);
    if (!j) throw ExecutionError("benchmark " + benchmark_name + " has no cell for " + cell_key(*cube, i));
    bench[i] = benchmark.cell(*j).measures[bm];
  }
  return discrepancy_model(std::move(m), std::move(bench));
}

Model benchmark_constant(CubePtr cube, const std::string& measure, double value) {
  Model m = base_model("benchmark", cube, measure);
  m.binding.emplace_back("benchmark", format_number(value));
  cube->measure_index(measure);
  return discrepancy_model(std::move(m), std::vector<double>(cube->size(), value));
}

Model variance_test(CubePtr fresh, const Cube& old, const std::string& measure) {
  Model m = base_model("variance_test", fresh, measure);
  m.binding.emplace_back("against", old.name());
  const auto v = fresh->column(measure);
  const auto w = old.column(measure);
  if (v.size() < 2 || w.size() < 2) throw ExecutionError("variance_test needs at least 2 cells in each cube");
  const double var_new = stats::variance(v);
  const double var_old = stats::variance(w);
  const double mean_new = stats::mean(v);
  const double sd_new = std::sqrt(var_new);
  const double f = var_new > 0 ? var_old / var_new : std::numeric_limits<double>::infinity();
  std::vector<double> disc(v.size()), above(v.size()), below(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    disc[i] = v[i] - mean_new;
    above[i] = std::abs(disc[i]) > sd_new ? 1.0 : 0.0;
    below[i] = 1.0 - above[i];
  }
  m.components.push_back(ModelComponent::numeric("Fstat", std::vector<double>(v.size(), f)));
  m.components.push_back(ModelComponent::numeric("Discrepancy", std::move(disc)));
  m.components.push_back(ModelComponent::bitmap("AboveStdev", std::move(above), "variance"));
  m.components.push_back(ModelComponent::bitmap("BelowStdev", std::move(below), "variance"));
  m.characterization["f_ratio"] = f;
  m.characterization["f_ratio_inverse"] = var_old > 0 ? var_new / var_old : std::numeric_limits<double>::infinity();
  m.characterization["mean_new"] = mean_new;
  m.characterization["mean_old"] = stats::mean(w);
  m.characterization["stdev_new"] = sd_new;
  m.characterization["stdev_old"] = std::sqrt(var_old);
  return m;
}

}  // namespace intentcube
