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

#include <doctest.h>

#include "slotfill/errors.h"
#include "slotfill/json_repair.h"
#include "slotfill/pipeline.h"

using namespace slotfill;
using nlohmann::json;

TEST_CASE("rung 1: strict objects and arrays of objects") {
  auto j = repair::parse_object_with_repair(R"({"a": "b"})");
  REQUIRE(j.has_value());
  CHECK((*j)["a"] == "b");

  auto merged = repair::parse_object_with_repair(R"([{"a": "1"}, {"b": "2"}])");
  REQUIRE(merged.has_value());
  CHECK((*merged)["a"] == "1");
  CHECK((*merged)["b"] == "2");
}

TEST_CASE("rung 2: longest brace-balanced substring survives prose wrappers") {
  const std::string raw = "Sure! Here is the result: {\"Company Name\": \"Net Company\"} hope it helps";
  CHECK(repair::longest_balanced_object(raw) == R"({"Company Name": "Net Company"})");
  auto j = repair::parse_object_with_repair(raw);
  REQUIRE(j.has_value());
  CHECK((*j)["Company Name"] == "Net Company");
}

TEST_CASE("rung 3: quote, fence and trailing-comma relaxation") {
  auto j = repair::parse_object_with_repair("```json\n{'Customer Name': 'John Doe',}\n```");
  REQUIRE(j.has_value());
  CHECK((*j)["Customer Name"] == "John Doe");

  auto py = repair::parse_object_with_repair(R"({"a": None, "b": True})");
  REQUIRE(py.has_value());
  CHECK((*py)["a"].is_null());
  CHECK((*py)["b"] == true);
}

TEST_CASE("rung 4: line-wise salvage") {
  auto j = repair::parse_object_with_repair(
      "Customer Name: John Doe\nAccount Number: 123456\n");
  REQUIRE(j.has_value());
  CHECK((*j)["Customer Name"] == "John Doe");
  CHECK((*j)["Account Number"] == "123456");

  auto lists = repair::salvage_lines("Plans: [basic plan, premium plan]\n");
  REQUIRE(lists.has_value());
  CHECK((*lists)["Plans"].size() == 2);
}

TEST_CASE("hopeless input fails every rung") {
  CHECK_FALSE(repair::parse_object_with_repair("").has_value());
  CHECK_FALSE(repair::parse_object_with_repair("complete nonsense").has_value());
  CHECK_FALSE(repair::parse_object_with_repair("12345").has_value());
}

TEST_CASE("parse_model_response maps worked-example values into a frame") {
  SlotFrame frame = pipeline::parse_model_response(
      R"({"Customer Name": "John Doe", "Account Number": "123456"})");
  CHECK(frame.entries.size() == 2);
  CHECK(frame.entries.at("Customer Name") == std::vector<std::string>{"John Doe"});
  CHECK(frame.entries.at("Account Number") == std::vector<std::string>{"123456"});
}

TEST_CASE("parse_model_response eliminates NA/empty entries") {
  CHECK(pipeline::parse_model_response(R"({"Claim Number": "NA"})").empty());
  CHECK(pipeline::parse_model_response(R"({"a": "N/A", "b": null, "c": ""})").empty());
  CHECK(pipeline::parse_model_response(R"({"a": ["NA", "n/a"]})").empty());
  SlotFrame mixed = pipeline::parse_model_response(R"({"a": ["NA", "real"]})");
  CHECK(mixed.entries.at("a") == std::vector<std::string>{"real"});
}

TEST_CASE("parse_model_response repairs prose wrappers and trailing commas") {
  SlotFrame frame = pipeline::parse_model_response(
      "Here you go: {\"Company Name\": \"Net Company\"},");
  CHECK(frame.entries.at("Company Name") == std::vector<std::string>{"Net Company"});
}

TEST_CASE("parse_model_response promotes scalars and stringifies numbers") {
  SlotFrame frame = pipeline::parse_model_response(R"({"Account Number": 123456})");
  CHECK(frame.entries.at("Account Number") == std::vector<std::string>{"123456"});
}

TEST_CASE("parse_model_response throws with the raw text attached") {
  try {
    pipeline::parse_model_response("total garbage with no structure");
    FAIL("expected UnparseableResponseError");
  } catch (const UnparseableResponseError& e) {
    CHECK(e.raw() == "total garbage with no structure");
  }
}

TEST_CASE("parse_model_response is deterministic") {
  const std::string raw = "{'a': 'x', 'b': ['y', 'NA'],}";
  CHECK(pipeline::parse_model_response(raw) == pipeline::parse_model_response(raw));
}
