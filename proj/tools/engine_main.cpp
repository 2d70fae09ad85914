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

#include <CLI11.hpp>
#include <csignal>
#include <fstream>
#include <iostream>
#include <string>

#include "intentcube/intents/documents.hpp"
#include "intentcube/server/http.hpp"
#include "intentcube/server/service.hpp"

namespace {

using namespace intentcube;

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

std::string trimmed(const std::string& line) {
  const auto b = line.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = line.find_last_not_of(" \t\r");
  return line.substr(b, e - b + 1);
}

// One statement per line; blank lines and `#` comments are skipped.
int run_script(Service& service, std::istream& in) {
  const auto id = service.open_session();
  int failures = 0;
  std::string line;
  while (std::getline(in, line)) {
    const auto text = trimmed(line);
    if (text.empty() || text[0] == '#') continue;
    const auto r = service.submit(id, text);
    if (r.status != 200) ++failures;
    std::cout << r.body << '\n';
  }
  std::cout.flush();
  return failures == 0 ? 0 : 1;
}

int repl(Service& service) {
  const auto id = service.open_session();
  std::string line;
  std::cerr << "iql> " << std::flush;
  while (std::getline(std::cin, line)) {
    const auto text = trimmed(line);
    if (text == ":quit" || text == ":q") break;
    if (text == ":dashboard") {
      std::cout << service.dashboard(id).body << '\n';
    } else if (text == ":catalog") {
      std::cout << service.catalog().body << '\n';
    } else if (text.rfind(":render ", 0) == 0) {
      try {
        std::cout << canonical_text(text.substr(8)) << '\n';
      } catch (const std::exception& e) {
        std::cout << error_json(e) << '\n';
      }
    } else if (!text.empty()) {
      std::cout << service.submit(id, text).body << '\n';
    }
    std::cerr << "iql> " << std::flush;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intentional analytics engine over multidimensional cubes"};
  app.require_subcommand(1);
  std::string catalog_dir;
  std::string script;
  std::string host = "127.0.0.1";
  int port = 8080;

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--catalog", catalog_dir, "Catalog directory")->required()->check(CLI::ExistingDirectory);
  serve->add_option("--port", port, "Port, 0 for any")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Address to bind");
  auto* interactive = app.add_subcommand("repl", "Read statements from standard input");
  interactive->add_option("--catalog", catalog_dir, "Catalog directory")->required()->check(CLI::ExistingDirectory);
  auto* run = app.add_subcommand("run", "Run a script and print one JSON document per statement");
  run->add_option("--catalog", catalog_dir, "Catalog directory")->required()->check(CLI::ExistingDirectory);
  run->add_option("--script", script, "Script file, one statement per line; '-' reads standard input")->required();
  CLI11_PARSE(app, argc, argv);

  EngineOptions options;
  options.seed = seed_from_environment();
  auto engine = std::make_shared<Engine>(std::make_shared<Catalog>(), ModelRegistry::with_defaults(),
                                         FunctionRegistry::with_defaults(), options);
  try {
    load_catalog_directory(*engine, catalog_dir);
  } catch (const std::exception& e) {
    std::cerr << error_json(e) << '\n';
    return 2;
  }
  Service service(engine);

  if (*run) {
    if (script == "-") return run_script(service, std::cin);
    std::ifstream in(script);
    if (!in) {
      std::cerr << "cannot open " << script << '\n';
      return 2;
    }
    return run_script(service, in);
  }
  if (*interactive) return repl(service);

  HttpServer server(service);
  const int bound = server.bind(host, port);
  if (bound < 0) {
    std::cerr << "cannot bind " << host << ":" << port << '\n';
    return 2;
  }
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "listening on " << host << ":" << bound << '\n';
  server.listen();
  g_server = nullptr;
  return 0;
}
