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

#include <cstddef>
#include <vector>

#include "intentcube/mdcore/cube.hpp"

namespace intentcube {

// proxies[i] lists the old cells related to new cell i. Never empty.
using Proxies = std::vector<std::vector<std::size_t>>;

// Two cells are related when, on every dimension of either cube, their
// coordinates roll up to the same member at the join of their levels. A
// dimension missing from a cube counts as ALL. A new cell without any related
// old cell is mapped to the whole old cube.
Proxies proxies(const Cube& old_cube, const Cube& new_cube);

Proxies identity_proxies(std::size_t n);

}  // namespace intentcube
