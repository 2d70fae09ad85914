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

#include <array>

// Printed reference values over the CN and CO fixture cubes, in canonical
// cell order: education (Assoc, Post-grad, Some-college, University) major,
// then work class.

namespace intentcube::testing {

// CO: work_class.L1 in (Gov, Private, Self-emp). Magnitudes only.
inline constexpr std::array<double, 12> kZscoresCO = {
    0.8167, 0.7101, 1.1053,  // Assoc
    0.1039, 0.6240, 1.2862,  // Post-grad
    1.5759, 1.4628, 0.7888,  // Some-college
    0.3613, 0.0641, 1.0827,  // University
};

// CN: work_class.L0 in (Federal-gov, Local-gov, State-gov, Private,
// Self-emp-inc, Self-emp-not-inc). Magnitudes only.
inline constexpr std::array<double, 24> kZscoresCN = {
    0.554, 0.509, 1.069, 0.576, 1.328, 0.628,  //
    0.123, 0.148, 0.102, 0.456, 2.420, 0.006,  //
    0.764, 0.806, 2.158, 1.159, 1.485, 0.166,  //
    0.003, 0.257, 0.636, 0.077, 1.635, 0.268,  //
};

inline constexpr std::array<double, 24> kSurpriseCN = {
    0.263, 0.308, 0.252, 0.134, 0.222, 0.477,  //
    0.019, 0.044, 0.002, 0.168, 1.134, 1.280,  //
    0.812, 0.770, 0.582, 0.304, 0.697, 0.623,  //
    0.358, 0.105, 0.275, 0.013, 0.552, 0.814,  //
};

inline constexpr std::array<int, 24> kRankCN = {
    17, 16, 22, 18, 4, 5,  //
    10, 9,  14, 6,  1, 11,  //
    20, 21, 24, 23, 3, 8,  //
    12, 15, 19, 13, 2, 7,  //
};

inline constexpr std::array<int, 24> kLowCN = {
    0, 0, 1, 0, 0, 0,  //
    0, 0, 0, 0, 0, 0,  //
    0, 0, 1, 1, 0, 0,  //
    0, 0, 0, 0, 0, 0,  //
};

inline constexpr std::array<double, 24> kFemaleCN = {
    40.66, 37.61, 39.36, 38.05, 42.07, 38.47,  //
    47.76, 43.83, 40.14, 41.55, 48.73, 38.28,  //
    38.25, 35.45, 34.01, 34.86, 43.96, 36.57,  //
    42.41, 41.66, 38.95, 39.45, 44.83, 39.04,  //
};

// (Assoc, Private) is printed as 3.1; its own columns give 41.06 - 38.05 = 3.01.
inline constexpr std::array<double, 24> kFemaleDiscrepancy = {
    0.49, 3.72, -0.27, 3.01, 6.61, 7.41,  //
    -3.9, 0.13, 2.82,  3.64, 4.32, 5.11,  //
    2.06, 4.69, 0.72,  3.87, 5.35, 7.46,  //
    0.97, 0.68, 1.87,  3.61, 5.08, 5.4,   //
};

// Gov slice of CN: Federal-gov, Local-gov, State-gov per education.
inline constexpr std::array<double, 12> kGovDiscrepancy = {
    -0.02, 0.15, -2.08,  //
    2.68,  2.78, 1.78,   //
    -0.86, -1.03, -6.44,  //
    2.20,  1.16, -0.35,  //
};

inline constexpr std::array<int, 12> kGovAboveStdev = {0, 0, 0, 1, 1, 0, 0, 0, 1, 0, 0, 0};

}  // namespace intentcube::testing
