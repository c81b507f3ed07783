/*
 * Copyright 2026 The Atria Authors.
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

// HTTP API: routing, status codes and payload contract.

#include <gtest/gtest.h>

#include <atria/http_service.hpp>

#include <future>
#include <thread>

#include "api_contract.hpp"
#include "fixtures.hpp"

using namespace atria;
using namespace atria::testing;

namespace {

ApiRequest get(std::string path, std::map<std::string, std::string> query = {}) {
  return {"GET", std::move(path), std::move(query), {}};
}

nlohmann::json body(const ApiResponse& r) { return nlohmann::json::parse(r.body); }

class ApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_TRUE(store.add(ex1()));
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      gen::PolicyConfig p;
      p.seed = seed;
      generated.push_back(gen::simulate(gen::generate_program(seed, 5, 3), p));
      ASSERT_TRUE(store.add(generated.back()));
    }
  }

  ExpressionTree tree(const std::string& id) const { return store.get(id)->tree; }

  RunStore store;
  Api api{store, {"sub"}};
  std::vector<atria::Run> generated;
};

}  // namespace

TEST_F(ApiTest, ListsRuns) {
  const auto r = api.handle(get("/api/runs"));
  ASSERT_EQ(r.status, 200);
  const auto runs = body(r);
  ASSERT_EQ(runs.size(), 4u);
  bool found = false;
  for (const auto& run : runs)
    if (run["run_id"] == "ex1") {
      found = true;
      EXPECT_EQ(run["node_count"], 6);
      EXPECT_EQ(run["has_source"], true);
    }
  EXPECT_TRUE(found);
}

TEST_F(ApiTest, Ex1Tree) {
  const auto r = api.handle(get("/api/runs/ex1/tree", {{"collapsed", ""}}));
  ASSERT_EQ(r.status, 200) << r.body;
  const auto payload = body(r);
  ASSERT_EQ(payload["nodes"].size(), 6u);
  EXPECT_EQ(payload["nodes"][0]["id"], 0);
  EXPECT_EQ(payload["nodes"][0]["x"], 0.0);
  EXPECT_EQ(payload["edges"].size(), 5u);
  EXPECT_EQ(payload["nodes"][0]["tooltip"]["time_ns"], 10'000);
  EXPECT_EQ(payload["nodes"][0]["border"], "dashed");
  EXPECT_EQ(check_tree_payload(payload, ViewTree(tree("ex1")), TimeMetric::Inclusive), Problems{});
}

TEST_F(ApiTest, DefaultCollapseUsesTheUninterestingSet) {
  const auto payload = body(api.handle(get("/api/runs/ex1/tree", {{"metric", "exclusive"}})));
  ASSERT_EQ(payload["nodes"].size(), 3u);
  EXPECT_EQ(payload["nodes"][2]["mark"], "triangle");
  EXPECT_EQ(payload["nodes"][2]["tooltip"]["hidden_descendants"], 3);
  EXPECT_EQ(payload["collapsed"], nlohmann::json::array({2}));
  const ViewTree view(tree("ex1"), {node_id(2)});
  EXPECT_EQ(check_tree_payload(payload, view, TimeMetric::Exclusive), Problems{});
}

TEST_F(ApiTest, SelfCompareIsZero) {
  const auto r = api.handle(get("/api/compare", {{"a", "ex1"}, {"b", "ex1"}}));
  ASSERT_EQ(r.status, 200);
  const auto payload = body(r);
  EXPECT_EQ(payload["slower"], "tie");
  ASSERT_EQ(payload["matches"].size(), 6u);
  for (const auto& m : payload["matches"]) EXPECT_EQ(m["delta_ns"], 0);

  const auto tree_cmp = body(api.handle(get("/api/runs/ex1/tree", {{"compare", "ex1"}, {"collapsed", ""}})));
  for (const auto& n : tree_cmp["nodes"]) {
    EXPECT_EQ(n["delta_ns"], 0);
    EXPECT_EQ(n["fill"], "#f7f7f7");
  }
}

TEST_F(ApiTest, GeneratedRunsMatchTheCore) {
  for (const auto& run : generated) {
    const auto t = tree(run.run_id);
    for (auto metric : {TimeMetric::Inclusive, TimeMetric::Exclusive}) {
      const std::string m(to_string(metric));
      auto payload = body(api.handle(get("/api/runs/" + run.run_id + "/tree", {{"metric", m}, {"collapsed", ""}})));
      EXPECT_EQ(check_tree_payload(payload, ViewTree(t), metric), Problems{});

      const auto other = generated[0].run_id;
      const auto other_tree = tree(other);
      payload = body(api.handle(
          get("/api/runs/" + run.run_id + "/tree", {{"metric", m}, {"collapsed", "1,4"}, {"compare", other}})));
      EXPECT_EQ(check_tree_payload(payload, ViewTree(t, {node_id(1), node_id(4)}), metric, &other_tree),
                Problems{});

      payload = body(api.handle(get("/api/compare", {{"a", run.run_id}, {"b", std::string("ex1")}, {"metric", m}})));
      EXPECT_EQ(check_compare_payload(payload, t, tree("ex1"), metric), Problems{});

      payload = body(api.handle(get("/api/runs/" + run.run_id + "/hotspots", {{"metric", m}, {"n", "5"}})));
      EXPECT_EQ(check_hotspots_payload(payload, t, metric, 5), Problems{});
    }
  }
}

TEST_F(ApiTest, SourceAndNode) {
  auto payload = body(api.handle(get("/api/runs/ex1/source")));
  EXPECT_EQ(payload["line_count"], 3);
  EXPECT_EQ(payload["lines"]["3"], nlohmann::json::array({2, 3, 4, 5}));
  EXPECT_EQ(payload["nodes"]["2"], nlohmann::json::array({3, 5}));

  payload = body(api.handle(get("/api/runs/ex1/node/2")));
  EXPECT_EQ(payload["descendants"], 3);
  EXPECT_EQ(payload["exclusive_ns"], 2'000);
  EXPECT_TRUE(payload["elided_edges"].empty());
}

TEST_F(ApiTest, NodeElidedEdgesHonourTheLibraryFlag) {
  auto run = ex1();
  run.run_id = "ex1-lib";
  run.edges.push_back(elided(0, 2, EdgeKind::FunctionReuse));
  ASSERT_TRUE(store.add(run));
  EXPECT_TRUE(body(api.handle(get("/api/runs/ex1-lib/node/0", {{"library", "0"}})))["elided_edges"].empty());
  EXPECT_EQ(body(api.handle(get("/api/runs/ex1-lib/node/0", {{"library", "1"}})))["elided_edges"].size(), 1u);
}

TEST_F(ApiTest, StatusCodes) {
  EXPECT_EQ(api.handle(get("/api/runs/nope/tree")).status, 404);
  EXPECT_EQ(api.handle(get("/api/runs/ex1/node/99")).status, 404);
  EXPECT_EQ(api.handle(get("/api/runs/ex1/node/abc")).status, 400);
  EXPECT_EQ(api.handle(get("/api/runs/ex1/tree", {{"metric", "wall"}})).status, 400);
  EXPECT_EQ(api.handle(get("/api/runs/ex1/tree", {{"collapsed", "1,x"}})).status, 400);
  EXPECT_EQ(api.handle(get("/api/runs/ex1/tree", {{"collapsed", "42"}})).status, 404);
  EXPECT_EQ(api.handle(get("/api/runs/ex1/hotspots", {{"n", "-1"}})).status, 400);
  EXPECT_EQ(api.handle(get("/api/compare", {{"a", "ex1"}})).status, 400);
  EXPECT_EQ(api.handle(get("/api/elsewhere")).status, 404);
  EXPECT_EQ(api.handle({"DELETE", "/api/runs", {}, {}}).status, 405);

  auto no_source = ex1();
  no_source.run_id = "bare";
  no_source.source.reset();
  ASSERT_TRUE(store.add(no_source));
  EXPECT_EQ(api.handle(get("/api/runs/bare/source")).status, 404);
}

TEST_F(ApiTest, Uploads) {
  const auto bad = api.handle({"POST", "/api/runs", {}, read_file(data_path("duplicate_provenance.json"))});
  EXPECT_EQ(bad.status, 422);
  EXPECT_NE(bad.body.find("DuplicateProvenance"), std::string::npos);
  EXPECT_EQ(body(bad)["violations"][0]["ids"], nlohmann::json::array({4, 5}));

  EXPECT_EQ(api.handle({"POST", "/api/runs", {}, read_file(data_path("truncated.json"))}).status, 400);
  EXPECT_EQ(api.handle({"POST", "/api/runs", {}, serialize_trace(ex1())}).status, 409);

  auto fresh = ex1();
  fresh.run_id = "ex1-copy";
  const auto ok = api.handle({"POST", "/api/runs", {}, serialize_trace(fresh)});
  EXPECT_EQ(ok.status, 201);
  EXPECT_EQ(body(ok)["run_id"], "ex1-copy");
  EXPECT_EQ(api.handle(get("/api/runs/ex1-copy/tree")).status, 200);
}

TEST_F(ApiTest, SvgEndpointMatchesDirectRender) {
  const auto r = api.handle(get("/api/runs/ex1/render.svg", {{"collapsed", ""}}));
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.content_type, "image/svg+xml");
  EXPECT_EQ(r.body, render_svg(build_scene(ViewTree(tree("ex1")), TimeMetric::Inclusive)));
}

TEST_F(ApiTest, ConcurrentReadsAgree) {
  const auto path = "/api/runs/" + generated[1].run_id + "/tree";
  const auto expected = api.handle(get(path)).body;
  std::vector<std::future<bool>> results;
  for (int t = 0; t < 8; ++t)
    results.push_back(std::async(std::launch::async, [&, t] {
      bool same = true;
      for (int i = 0; i < 25; ++i) {
        same = same && api.handle(get(path)).body == expected;
        if (t == 0 && i % 5 == 0) {
          auto run = ex1();
          run.run_id = "upload-" + std::to_string(i);
          api.handle({"POST", "/api/runs", {}, serialize_trace(run)});
        }
      }
      return same;
    }));
  for (auto& f : results) EXPECT_TRUE(f.get());
  EXPECT_EQ(store.size(), 9u);
}

TEST_F(ApiTest, ServesOverHttp) {
  httplib::Server server;
  bind_routes(server, api);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/api/runs/ex1/tree?collapsed=&metric=inclusive");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, api.handle(get("/api/runs/ex1/tree", {{"collapsed", ""}, {"metric", "inclusive"}})).body);

  res = client.Get("/api/runs/missing/tree");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);

  res = client.Post("/api/runs", read_file(data_path("duplicate_provenance.json")), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 422);

  server.stop();
  worker.join();
}
