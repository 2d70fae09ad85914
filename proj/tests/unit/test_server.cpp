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

#include <gtest/gtest.h>
#include <httplib.h>

#include <nlohmann/json.hpp>
#include <thread>

#include "fixtures.hpp"
#include "intentcube/intents/documents.hpp"
#include "intentcube/server/http.hpp"
#include "intentcube/server/service.hpp"

namespace intentcube {
namespace {

using nlohmann::json;

std::shared_ptr<Engine> loaded_engine() {
  auto engine = std::make_shared<Engine>(std::make_shared<Catalog>());
  load_catalog_directory(*engine, testing::fixture_dir() / "catalog");
  return engine;
}

std::string body(const std::string& text) { return json{{"text", text}}.dump(); }

const std::string kDescribe = "with CO describe HoursPerWeek by work_class.L0";

class ServiceTest : public ::testing::Test {
 protected:
  Service service{loaded_engine()};
};

TEST_F(ServiceTest, SessionsGetDistinctIds) {
  const auto a = service.create_session();
  const auto b = service.create_session();
  EXPECT_EQ(a.status, 201);
  EXPECT_EQ(json::parse(a.body)["id"], "1");
  EXPECT_EQ(json::parse(b.body)["id"], "2");
  EXPECT_EQ(service.dashboard("2").body, "[]");
}

TEST_F(ServiceTest, SubmitAppendsToTheDashboard) {
  const auto id = service.open_session();
  const auto r = service.submit_json(id, body(kDescribe));
  ASSERT_EQ(r.status, 200) << r.body;
  const auto doc = json::parse(r.body);
  EXPECT_EQ(doc["highlight"]["core_cell_coordinates"].size(), 2u);
  EXPECT_EQ(doc["provenance"]["intention_text"], kDescribe);
  const auto q = service.submit(id, "cube DS group education.L3 agg avg(HoursPerWeek)");
  ASSERT_EQ(q.status, 200) << q.body;

  const auto dash = service.dashboard(id);
  EXPECT_EQ(dash.body, "[" + r.body + "," + q.body + "]");
  EXPECT_EQ(service.dashboard(id).body, dash.body);
  EXPECT_EQ(json::parse(dash.body)[1]["name"], "query_2");
}

TEST_F(ServiceTest, ErrorsAreStructured) {
  const auto id = service.open_session();
  auto r = service.submit(id, "with CN describe HoursPerWeek by");
  EXPECT_EQ(r.status, 400);
  auto j = json::parse(r.body);
  EXPECT_EQ(j["stage"], "parse");
  EXPECT_EQ(j["position"]["column"], 33);
  r = service.submit(id, "with NOPE describe HoursPerWeek");
  EXPECT_EQ(json::parse(r.body)["stage"], "plan");
  r = service.submit(id, "with SALES_BY_DISTRICT explain Revenue for region.L2 = 'Centre' using correlation(Revenue)");
  EXPECT_EQ(r.status, 422) << r.body;
  EXPECT_EQ(json::parse(r.body)["stage"], "execute");
  r = service.submit_json(id, "{\"txt\": 1}");
  EXPECT_EQ(json::parse(r.body)["stage"], "plan");
  EXPECT_EQ(service.submit("99", kDescribe).status, 404);
  EXPECT_EQ(service.dashboard("99").status, 404);
  // Failures leave the dashboard untouched.
  EXPECT_EQ(service.dashboard(id).body, "[]");
}

TEST_F(ServiceTest, SessionsAreIsolated) {
  const auto a = service.open_session();
  const auto b = service.open_session();
  ASSERT_EQ(service.submit(a, "cube DS group gender.L0 agg sum(HoursPerWeek) as G").status, 200);
  EXPECT_EQ(service.dashboard(b).body, "[]");
  EXPECT_EQ(json::parse(service.submit(b, "with G describe HoursPerWeek").body)["stage"], "plan");
  EXPECT_EQ(service.submit(a, "with G describe HoursPerWeek").status, 200);
  // Names are unique within a session.
  EXPECT_EQ(service.submit(a, "cube DS group gender.L0 agg avg(HoursPerWeek) as G").status, 400);
  EXPECT_EQ(service.submit(b, "cube DS group gender.L0 agg avg(HoursPerWeek) as G").status, 200);
}

TEST_F(ServiceTest, ConcurrentSessionsMatchSerialRuns) {
  const std::vector<std::string> script = {kDescribe, "with CN assess HoursPerWeek using q_Female",
                                           "with CN assess HoursPerWeek using hours_kpi",
                                           "with SALES_BY_DISTRICT suggest"};
  const auto serial = service.open_session();
  for (const auto& s : script) service.submit(serial, s);
  const auto expected = service.dashboard(serial).body;

  std::vector<std::string> ids;
  for (int t = 0; t < 4; ++t) ids.push_back(service.open_session());
  std::vector<std::thread> threads;
  for (const auto& id : ids) {
    threads.emplace_back([&, id] {
      for (const auto& s : script) service.submit(id, s);
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& id : ids) EXPECT_EQ(service.dashboard(id).body, expected);
}

TEST(ServiceRegistration, BenchmarkAndKpiRegisteredAtRuntime) {
  auto engine = std::make_shared<Engine>(std::make_shared<Catalog>());
  Service service(engine);
  const auto dims = testing::fixture_dir() / "catalog" / "dimensions";
  for (const char* d : {"education", "work_class", "gender"}) {
    const auto path = (dims / (std::string(d) + ".csv")).string();
    ASSERT_EQ(service.register_entry("dimension", json{{"name", d}, {"paths", {path}}}.dump()).status, 201);
  }
  const auto root = testing::fixture_dir() / "catalog";
  ASSERT_EQ(service.register_entry("cube", json{{"name", "DS"}, {"facts", (root / "facts/ds.csv").string()}}.dump()).status,
            201);
  ASSERT_EQ(service.register_entry("cube", json{{"name", "CN"}, {"cells", (root / "cubes/cn.csv").string()}}.dump()).status,
            201);
  const std::string female =
      "cube DS where education.L3 = 'Post-secondary' and work_class.L2 = 'With-Pay' and gender.L0 = 'Female' "
      "group education.L2, work_class.L0, gender.L0 agg avg(HoursPerWeek)";
  ASSERT_EQ(service.register_entry("benchmark", json{{"name", "q_Female"}, {"query", female}}.dump()).status, 201);
  EXPECT_EQ(service.register_entry("benchmark", json{{"name", "q_Female"}, {"query", female}}.dump()).status, 400);
  ASSERT_EQ(service.register_entry("kpi-rules", json{{"name", "hours"}, {"rules", "Low:0:40;Expected:40:55;Excessive:55:"},
                                                     {"target", "Expected"}}
                                                   .dump())
                .status,
            201);

  const auto id = service.open_session();
  auto r = json::parse(service.submit(id, "with CN assess HoursPerWeek using q_Female").body);
  EXPECT_EQ(r["highlight"]["component"], "MC+");
  r = json::parse(service.submit(id, "with CN assess HoursPerWeek using hours").body);
  EXPECT_EQ(r["highlight"]["component"], "Low");
  EXPECT_EQ(r["highlight"]["core_cells"].size(), 3u);

  const auto cat = json::parse(service.catalog().body);
  EXPECT_EQ(cat["cubes"].size(), 2u);
  EXPECT_EQ(cat["benchmarks"][0]["name"], "q_Female");
}

TEST(ServiceRestart, CatalogCubesAreVisibleAfterRestart) {
  for (int run = 0; run < 2; ++run) {
    Service service(loaded_engine());
    const auto id = service.open_session();
    EXPECT_EQ(id, "1");
    EXPECT_EQ(service.submit(id, "with CN describe HoursPerWeek").status, 200);
  }
}

TEST(ServiceRender, CanonicalText) {
  Service service(loaded_engine());
  auto r = service.render(body("with  CN describe  HoursPerWeek BY work_class.L0"));
  EXPECT_EQ(json::parse(r.body)["text"], "with CN describe HoursPerWeek by work_class.L0");
  r = service.render(body("with CN"));
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(json::parse(r.body)["stage"], "parse");
}

TEST(Http, EndpointsRoundTrip) {
  Service service(loaded_engine());
  HttpServer server(service);
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread loop([&] { server.listen(); });

  httplib::Client client("127.0.0.1", port);
  auto created = client.Post("/sessions", "", "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const std::string id = json::parse(created->body)["id"];

  auto submitted = client.Post("/sessions/" + id + "/intentions", body(kDescribe), "application/json");
  ASSERT_TRUE(submitted);
  EXPECT_EQ(submitted->status, 200);
  EXPECT_EQ(json::parse(submitted->body)["highlight"]["component"], "Outliers");

  auto bad = client.Post("/sessions/" + id + "/intentions", body("with CN describe"), "application/json");
  EXPECT_EQ(bad->status, 400);
  EXPECT_EQ(json::parse(bad->body)["stage"], "parse");

  auto dash = client.Get("/sessions/" + id + "/dashboard");
  EXPECT_EQ(dash->status, 200);
  EXPECT_EQ(dash->body, "[" + submitted->body + "]");
  EXPECT_EQ(client.Get("/sessions/" + id + "/dashboard")->body, dash->body);
  EXPECT_EQ(client.Get("/sessions/42/dashboard")->status, 404);

  auto reg = client.Post("/catalog/benchmark", json{{"name", "b2"}, {"query", "cube SALES group region.L2 agg sum(Revenue)"}}.dump(),
                         "application/json");
  EXPECT_EQ(reg->status, 201);
  auto wrong = client.Post("/catalog/widget", "{}", "application/json");
  EXPECT_EQ(wrong->status, 400);
  EXPECT_EQ(json::parse(wrong->body)["stage"], "plan");
  auto cat = client.Get("/catalog");
  EXPECT_NE(cat->body.find("\"b2\""), std::string::npos);
  auto rendered = client.Post("/render", body("with CN suggest"), "application/json");
  EXPECT_EQ(json::parse(rendered->body)["text"], "with CN suggest");
  auto nowhere = client.Get("/nowhere");
  EXPECT_EQ(nowhere->status, 404);
  EXPECT_EQ(json::parse(nowhere->body)["stage"], "plan");
  EXPECT_EQ(client.Delete("/sessions/" + id)->status, 204);
  EXPECT_EQ(client.Delete("/sessions/" + id)->status, 404);

  server.stop();
  loop.join();
}

}  // namespace
}  // namespace intentcube
