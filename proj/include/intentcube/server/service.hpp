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
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "intentcube/intents/engine.hpp"

namespace intentcube {

struct Response {
  int status = 200;
  std::string body;
};

// An analyst's sequence of enhanced cubes. Submissions are serialized.
class Session {
 public:
  explicit Session(std::string id) : id_(std::move(id)) {}

  const std::string& id() const { return id_; }

 private:
  friend class Service;

  std::string id_;
  mutable std::mutex mu_;
  Bindings bindings_;
  // Serialized documents, in execution order.
  std::vector<std::string> documents_;
};

// Sessions and catalog management behind the HTTP and command-line front
// ends. Request and response bodies are JSON; errors are
// {"stage", "message", "position"?}.
class Service {
 public:
  explicit Service(std::shared_ptr<Engine> engine);

  Engine& engine() const { return *engine_; }

  // Returns the new session id.
  std::string open_session();
  // {"id": "..."}
  Response create_session();
  // 204, or 404 for an unknown session.
  Response close_session(const std::string& id);
  // `body` is {"text": "..."}.
  Response submit_json(const std::string& session, const std::string& body);
  Response submit(const std::string& session, const std::string& text);
  Response dashboard(const std::string& session) const;
  Response register_entry(const std::string& kind, const std::string& body);
  Response catalog() const;
  // {"text": "..."} to {"text": canonical}
  Response render(const std::string& body) const;

 private:
  std::shared_ptr<Session> find(const std::string& id) const;

  std::shared_ptr<Engine> engine_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::size_t next_id_ = 1;
};

int status_of(const std::exception& e);

}  // namespace intentcube
