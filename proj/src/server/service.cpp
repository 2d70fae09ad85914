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

#include "intentcube/server/service.hpp"

#include <nlohmann/json.hpp>

#include "intentcube/error.hpp"
#include "intentcube/intents/documents.hpp"

namespace intentcube {

namespace {

using nlohmann::json;

Response failure(const std::exception& e) { return {status_of(e), error_json(e)}; }

Response missing_session(const std::string& id) {
  return {404, json{{"stage", "plan"}, {"message", "unknown session " + id}}.dump()};
}

std::string text_of(const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw PlanError(std::string("request body is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("text") || !j["text"].is_string()) {
    throw PlanError("request body needs a string field 'text'");
  }
  return j["text"].get<std::string>();
}

}  // namespace

int status_of(const std::exception& e) {
  const auto stage = error_stage(e);
  if (stage == "parse" || stage == "plan") return 400;
  return 422;
}

Service::Service(std::shared_ptr<Engine> engine) : engine_(std::move(engine)) {}

std::string Service::open_session() {
  std::unique_lock lock(mu_);
  const auto id = std::to_string(next_id_++);
  sessions_.emplace(id, std::make_shared<Session>(id));
  return id;
}

Response Service::create_session() { return {201, json{{"id", open_session()}}.dump()}; }

Response Service::close_session(const std::string& id) {
  std::unique_lock lock(mu_);
  if (sessions_.erase(id) == 0) return missing_session(id);
  return {204, {}};
}

std::shared_ptr<Session> Service::find(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Response Service::submit_json(const std::string& session, const std::string& body) {
  std::string text;
  try {
    text = text_of(body);
  } catch (const std::exception& e) {
    return failure(e);
  }
  return submit(session, text);
}

Response Service::submit(const std::string& session, const std::string& text) {
  auto s = find(session);
  if (!s) return missing_session(session);
  std::lock_guard lock(s->mu_);
  try {
    // Bindings change only when the whole statement succeeds.
    Bindings bindings = s->bindings_;
    auto doc = to_json(engine_->submit(text, bindings, s->documents_.size() + 1));
    s->bindings_ = std::move(bindings);
    s->documents_.push_back(doc);
    return {200, std::move(doc)};
  } catch (const std::exception& e) {
    return failure(e);
  }
}

Response Service::dashboard(const std::string& session) const {
  auto s = find(session);
  if (!s) return missing_session(session);
  std::lock_guard lock(s->mu_);
  std::string out = "[";
  for (std::size_t i = 0; i < s->documents_.size(); ++i) out += (i ? "," : "") + s->documents_[i];
  return {200, out + "]"};
}

Response Service::register_entry(const std::string& kind, const std::string& body) {
  try {
    const auto name = register_catalog_entry(*engine_, kind, body);
    return {201, json{{"kind", kind}, {"name", name}}.dump()};
  } catch (const std::exception& e) {
    return failure(e);
  }
}

Response Service::catalog() const { return {200, catalog_json(*engine_)}; }

Response Service::render(const std::string& body) const {
  try {
    return {200, json{{"text", canonical_text(text_of(body))}}.dump()};
  } catch (const std::exception& e) {
    return failure(e);
  }
}

}  // namespace intentcube
