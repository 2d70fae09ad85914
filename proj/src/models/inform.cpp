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

#include "intentcube/error.hpp"
#include "intentcube/models/algorithms.hpp"

namespace intentcube {

double kl_to_uniform(const std::vector<double>& values) {
  double total = 0;
  for (double v : values) total += v;
  const auto n = static_cast<double>(values.size());
  double kl = 0;
  for (double v : values) {
    const double p = v / total;
    if (p > 0) kl += p * std::log(p * n);
  }
  return kl < 0 ? 0.0 : kl;
}

Model inform(const std::vector<CubePtr>& candidates, const std::vector<std::string>& descriptions,
             const std::string& measure) {
  if (candidates.size() != descriptions.size()) throw Error("inform: one description per candidate expected");
  std::vector<std::string> warnings;
  std::vector<std::size_t> kept;
  std::vector<double> scores;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto values = candidates[c]->column(measure);
    double total = 0;
    bool negative = false;
    for (double v : values) {
      total += v;
      negative = negative || v < 0;
    }
    if (values.empty() || !(total > 0) || negative) {
      warnings.push_back("candidate " + descriptions[c] + " skipped: measure " + measure +
                         " is not a positive distribution");
      continue;
    }
    kept.push_back(c);
    scores.push_back(kl_to_uniform(values));
  }
  if (kept.empty()) throw ExecutionError("no candidate cube can be scored on " + measure);

  // One axis per dimension; candidates lacking it sit at ALL.
  std::vector<Axis> axes;
  for (auto c : kept) {
    for (const auto& a : candidates[c]->axes()) {
      bool seen = false;
      for (auto& u : axes) {
        if (u.dimension->name() == a.dimension->name()) {
          seen = true;
          u.level = std::min(u.level, a.level);
        }
      }
      if (!seen) axes.push_back(a);
    }
  }
  std::vector<Cell> cells;
  std::vector<std::size_t> origin;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const auto& cand = *candidates[kept[k]];
    const auto m = static_cast<std::size_t>(cand.measure_index(measure));
    for (std::size_t i = 0; i < cand.size(); ++i) {
      Cell cell;
      for (const auto& a : axes) cell.coords.push_back(cand.coordinate(i, *a.dimension));
      cell.measures = {cand.cell(i).measures[m]};
      cells.push_back(std::move(cell));
      origin.push_back(k);
    }
  }
  std::vector<std::vector<Member>> keys;
  for (const auto& c : cells) keys.push_back(c.coords);
  auto unioned = std::make_shared<const Cube>("suggestions", axes, std::vector<std::string>{measure}, cells, true);

  const std::size_t n = unioned->size();
  std::vector<double> score(n, 0.0);
  std::vector<std::vector<double>> bits(kept.size(), std::vector<double>(n, 0.0));
  for (std::size_t r = 0; r < keys.size(); ++r) {
    const auto at = *unioned->find(keys[r]);
    score[at] = scores[origin[r]];
    bits[origin[r]][at] = 1.0;
  }

  Model m;
  m.type = "inform";
  m.measure = measure;
  m.cube = unioned;
  m.binding = {{"measure", measure}};
  m.warnings = std::move(warnings);
  m.components.push_back(ModelComponent::numeric("Score", std::move(score)));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    auto comp = ModelComponent::bitmap("Candidate_" + std::to_string(k + 1), std::move(bits[k]), "candidates");
    comp.characterization["kl"] = scores[k];
    m.components.push_back(std::move(comp));
    m.characterization["kl_" + std::to_string(k + 1)] = scores[k];
    m.binding.emplace_back("candidate_" + std::to_string(k + 1), descriptions[kept[k]]);
  }
  return m;
}

}  // namespace intentcube
