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

#include <stdexcept>
#include <string>

namespace intentcube {

// Base for every failure raised by the engine. The pipeline stage that
// raised it is recoverable from the dynamic type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Name resolution and plan construction failures (unknown cube, level,
// model type, benchmark...).
class PlanError : public Error {
 public:
  using Error::Error;
};

// Failures while computing data or models.
class ExecutionError : public Error {
 public:
  using Error::Error;
};

}  // namespace intentcube
