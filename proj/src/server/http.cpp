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

#include "intentcube/server/http.hpp"

#include <httplib.h>

namespace intentcube {

namespace {

constexpr const char* kJson = "application/json";

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body, kJson);
}

}  // namespace

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;

  explicit Impl(Service& s) : service(s) {}
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  auto& srv = impl_->server;
  auto& svc = impl_->service;
  srv.Post("/sessions", [&svc](const httplib::Request&, httplib::Response& res) { reply(res, svc.create_session()); });
  srv.Delete(R"(/sessions/([^/]+))", [&svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc.close_session(req.matches[1].str()));
  });
  srv.Post(R"(/sessions/([^/]+)/intentions)", [&svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc.submit_json(req.matches[1].str(), req.body));
  });
  srv.Get(R"(/sessions/([^/]+)/dashboard)", [&svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc.dashboard(req.matches[1].str()));
  });
  srv.Post(R"(/catalog/([^/]+))", [&svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc.register_entry(req.matches[1].str(), req.body));
  });
  srv.Get("/catalog", [&svc](const httplib::Request&, httplib::Response& res) { reply(res, svc.catalog()); });
  srv.Post("/render", [&svc](const httplib::Request& req, httplib::Response& res) { reply(res, svc.render(req.body)); });
  // No stack traces over the wire.
  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
    res.status = 500;
    res.set_content(R"({"stage":"execute","message":"internal error"})", kJson);
  });
  srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    res.set_content(R"({"stage":"plan","message":"no such endpoint"})", kJson);
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace intentcube
