// Copyright 2026 The slotfill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <thread>

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include "slotfill/errors.h"
#include "slotfill/service.h"
#include "test_util.h"

using namespace slotfill;
using namespace slotfill::service;
using nlohmann::json;

namespace {

ServiceConfig test_config() {
  ServiceConfig c;
  c.listen_host = "127.0.0.1";
  c.listen_port = 0;
  c.generation_backend = "oracle:" + testutil::fixture("annotated.jsonl");
  c.registry_path = testutil::fixture("registry_seed.json");
  c.max_in_flight = 64;
  return c;
}

json post_turn(httplib::Client& client, const json& body) {
  auto res = client.Post("/v1/slots/extract", body.dump(), "application/json");
  REQUIRE(res);
  json j = json::parse(res->body);
  j["_http_status"] = res->status;
  return j;
}

}  // namespace

TEST_CASE("service answers health, registry and extraction requests") {
  ServiceConfig config = test_config();
  config.validate();
  SlotService svc(config, testutil::fixture_registry());
  REQUIRE(svc.start());
  httplib::Client client("127.0.0.1", svc.port());

  SUBCASE("healthz") {
    auto res = client.Get("/healthz");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->body == "ok");
  }

  SUBCASE("registry dump lists labels with kinds and constraints") {
    auto res = client.Get("/v1/registry");
    REQUIRE(res);
    CHECK(res->status == 200);
    json j = json::parse(res->body);
    REQUIRE(j.contains("labels"));
    CHECK(j["labels"].size() == 12);
    bool reason_seen = false;
    for (const json& rec : j["labels"]) {
      if (rec["label"] == "Reason For Call") {
        reason_seen = true;
        CHECK(rec["kind"] == "abstractive");
        CHECK(!rec["triggers"].empty());
      }
    }
    CHECK(reason_seen);
  }

  SUBCASE("worked example turn extracts the company name") {
    json body = {{"session_id", "s1"},
                 {"turn",
                  {{"speaker", "agent"},
                   {"text", "Thank you for calling Net Company. How can I assist you today?"}}},
                 {"labels", {"Company Name"}}};
    json out = post_turn(client, body);
    CHECK(out["_http_status"] == 200);
    CHECK(out["status"] == "ok");
    CHECK(out["turn_index"] == 0);
    CHECK(out["frame"]["Company Name"] == json::array({"Net Company"}));
    CHECK(out["narrowed_labels"] == json::array({"Company Name"}));
    CHECK(out.contains("timings_ms"));
    CHECK(out.contains("warnings"));
  }

  SUBCASE("empty text is a validation error naming the field") {
    json body = {{"session_id", "s2"},
                 {"turn", {{"speaker", "customer"}, {"text", "   "}}}};
    json out = post_turn(client, body);
    CHECK(out["_http_status"] == 400);
    CHECK(out["status"] == "invalid_request");
    CHECK(out["field"] == "turn.text");
  }

  SUBCASE("unknown enum values are rejected, unknown fields ignored") {
    json bad_speaker = {{"session_id", "s3"},
                        {"turn", {{"speaker", "robot"}, {"text", "hi"}}}};
    CHECK(post_turn(client, bad_speaker)["_http_status"] == 400);

    json extra = {{"session_id", "s4"},
                  {"turn", {{"speaker", "customer"}, {"text", "hello there friend"}}},
                  {"unknown_knob", 42}};
    json out = post_turn(client, extra);
    CHECK(out["_http_status"] == 200);
  }

  SUBCASE("malformed body is a 400") {
    auto res = client.Post("/v1/slots/extract", "{not json", "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
  }

  SUBCASE("sessions are implicit and turn indices follow request order") {
    for (int i = 0; i < 4; ++i) {
      json body = {{"session_id", "ordered"},
                   {"turn", {{"speaker", i % 2 ? "customer" : "agent"},
                             {"text", "turn number " + std::to_string(i)}}}};
      json out = post_turn(client, body);
      CHECK(out["_http_status"] == 200);
      CHECK(out["turn_index"] == i);
    }
    CHECK(svc.session_count() >= 1);
  }

  svc.stop();
}

TEST_CASE("concurrent sessions all complete without drops") {
  ServiceConfig config = test_config();
  SlotService svc(config, testutil::fixture_registry());
  REQUIRE(svc.start());

  const int n_threads = 16;
  std::vector<int> status(n_threads, 0);
  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (int i = 0; i < n_threads; ++i) {
    threads.emplace_back([i, &status, port = svc.port()] {
      httplib::Client client("127.0.0.1", port);
      client.set_read_timeout(std::chrono::seconds(10));
      json body = {{"session_id", "conc-" + std::to_string(i)},
                   {"turn", {{"speaker", "customer"},
                             {"text", "the account number is 1010" + std::to_string(i)}}}};
      auto res = client.Post("/v1/slots/extract", body.dump(), "application/json");
      status[static_cast<size_t>(i)] = res ? res->status : -1;
    });
  }
  for (auto& t : threads) t.join();
  for (int s : status) CHECK(s == 200);
  svc.stop();
}

TEST_CASE("service config validation and env precedence") {
  ServiceConfig config;
  CHECK_THROWS_AS(config.validate(), ConfigError);

  config = test_config();
  ::setenv("SLOTFILL_MAX_IN_FLIGHT", "7", 1);
  config.apply_env();
  CHECK(config.max_in_flight == 7);
  ::unsetenv("SLOTFILL_MAX_IN_FLIGHT");
}

TEST_CASE("unknown backend specs are configuration errors") {
  CHECK_THROWS_AS(make_generation_backend("carrier-pigeon:coop"), ConfigError);
  CHECK_THROWS_AS(make_extractor_backend("smoke-signals"), ConfigError);
}
