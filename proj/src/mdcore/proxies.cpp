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

#include "intentcube/mdcore/proxies.hpp"

#include <map>
#include <numeric>

#include "intentcube/error.hpp"

namespace intentcube {

namespace {

int join(const Dimension& dim, int a, int b) {
  if (dim.precedes(a, b)) return b;
  if (dim.precedes(b, a)) return a;
  const int n = static_cast<int>(dim.level_count());
  int best = dim.top();
  for (int u = 0; u < n; ++u) {
    if (dim.precedes(a, u) && dim.precedes(b, u) && dim.precedes(u, best)) best = u;
  }
  return best;
}

}  // namespace

Proxies proxies(const Cube& old_cube, const Cube& new_cube) {
  std::map<std::string, std::shared_ptr<const Dimension>> dims;
  bool shared = false;
  for (const auto& a : new_cube.axes()) dims[a.dimension->name()] = a.dimension;
  for (const auto& a : old_cube.axes()) {
    auto [it, inserted] = dims.emplace(a.dimension->name(), a.dimension);
    shared = shared || !inserted;
  }
  if (!shared && !old_cube.axes().empty() && !new_cube.axes().empty()) {
    throw PlanError("cubes " + old_cube.name() + " and " + new_cube.name() + " share no dimension");
  }

  std::vector<std::size_t> everything(old_cube.size());
  std::iota(everything.begin(), everything.end(), std::size_t{0});

  Proxies out(new_cube.size());
  for (std::size_t i = 0; i < new_cube.size(); ++i) {
    auto& related = out[i];
    for (std::size_t j = 0; j < old_cube.size(); ++j) {
      bool ok = true;
      for (const auto& [name, dim] : dims) {
        const Member n = new_cube.coordinate(i, *dim);
        const Member o = old_cube.coordinate(j, *dim);
        const int l = join(*dim, n.level, o.level);
        if (dim->anc(n.level, l, n.ordinal) != dim->anc(o.level, l, o.ordinal)) {
          ok = false;
          break;
        }
      }
      if (ok) related.push_back(j);
    }
    if (related.empty()) related = everything;
  }
  return out;
}

Proxies identity_proxies(std::size_t n) {
  Proxies out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {i};
  return out;
}

}  // namespace intentcube
