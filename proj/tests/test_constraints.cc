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

#include <algorithm>
#include <regex>

#include <doctest.h>

#include "slotfill/constraints.h"
#include "slotfill/errors.h"
#include "slotfill/registry.h"
#include "slotfill/rng.h"
#include "test_util.h"

using namespace slotfill;
using namespace slotfill::constraints;
using nlohmann::json;

namespace {

ConstraintRule kind_rule(const std::string& kind) {
  return rule_from_json(json{{"type", "entity_kind"}, {"kind", kind}});
}

SlotFrame random_frame(SplitMix64* rng, const std::vector<std::string>& labels) {
  static const std::vector<std::string> values = {
      "123456",      "my account",  "john@x.com",  "7 PM",          "March 5 2024",
      "$40",         "500 mg",      "umm",          "premium plan",  "basic plan",
      "wifi doesn't work", "555-123-4567", "Net Company", "John Doe", "hello there",
      "99999",       "2 people",    "twenty dollars", "0",           "a"};
  SlotFrame frame;
  const int n_labels = rng->next_in(0, 4);
  for (int i = 0; i < n_labels; ++i) {
    const std::string& label =
        labels[static_cast<size_t>(rng->next_in(0, static_cast<int>(labels.size()) - 1))];
    const int n_values = rng->next_in(1, 3);
    for (int v = 0; v < n_values; ++v) {
      frame.add(label,
                values[static_cast<size_t>(rng->next_in(0, static_cast<int>(values.size()) - 1))]);
    }
  }
  return frame;
}

bool frame_subset(const SlotFrame& inner, const SlotFrame& outer) {
  for (const auto& [label, values] : inner.entries) {
    auto it = outer.entries.find(label);
    if (it == outer.entries.end()) return false;
    for (const std::string& v : values) {
      if (std::count(it->second.begin(), it->second.end(), v) <
          std::count(values.begin(), values.end(), v)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("partial cardinal accepts values with one digit token") {
  auto verdict = check(itn::apply_itn("500 mg"), rule_from_json(json{{"type", "partial_cardinal"}}));
  CHECK(verdict.passed);
  auto none = check(itn::apply_itn("my account"),
                    rule_from_json(json{{"type", "partial_cardinal"}}));
  CHECK_FALSE(none.passed);
  CHECK_FALSE(none.reason.empty());
}

TEST_CASE("entity kind mismatch fails with the expected kind in the reason") {
  auto verdict = check(itn::apply_itn("abc"), kind_rule("cardinal"));
  CHECK_FALSE(verdict.passed);
  CHECK(verdict.reason.find("cardinal") != std::string::npos);
}

TEST_CASE("email kind agrees with an independent RFC-lite pattern oracle") {
  static const std::regex email_re(R"(^[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}$)");
  const std::vector<std::string> samples = {
      "john@x.com",    "jane.doe@mail.com", "not an email", "user@@x.com",
      "a@b.co",        "trailing@dot.com.", "@nolocal.com", "x@y.z",
      "mixed text john@x.com"};
  for (const std::string& s : samples) {
    const bool oracle = std::regex_match(s, email_re);
    auto verdict = check(itn::apply_itn(s), kind_rule("email"));
    // The recognizer scans substrings, so restrict the comparison to inputs
    // that are a single token.
    if (s.find(' ') == std::string::npos) {
      CAPTURE(s);
      if (oracle) CHECK(verdict.passed);
    }
  }
  CHECK(check(itn::apply_itn("john@x.com"), kind_rule("email")).passed);
  CHECK_FALSE(check(itn::apply_itn("not an email"), kind_rule("email")).passed);
}

TEST_CASE("length and token count rules measure the canonical form") {
  auto len = rule_from_json(json{{"type", "length"}, {"min", 2u}, {"max", 6u}});
  CHECK(check(itn::apply_itn("Joe's"), len).passed);  // canonical "joes"
  CHECK_FALSE(check(itn::apply_itn("a"), len).passed);

  auto tokens = rule_from_json(json{{"type", "token_count"}, {"min", 2u}, {"max", 3u}});
  CHECK(check(itn::apply_itn("premium plan"), tokens).passed);
  CHECK_FALSE(check(itn::apply_itn("umm"), tokens).passed);
}

TEST_CASE("composite rules follow boolean semantics") {
  json any = {{"type", "any_of"},
              {"rules", json::array({json{{"type", "entity_kind"}, {"kind", "cardinal"}},
                                     json{{"type", "entity_kind"}, {"kind", "email"}}})}};
  auto rule = rule_from_json(any);
  CHECK(check(itn::apply_itn("123456"), rule).passed);
  CHECK(check(itn::apply_itn("j@x.com"), rule).passed);
  CHECK_FALSE(check(itn::apply_itn("hello"), rule).passed);

  json all = {{"type", "all_of"},
              {"rules", json::array({json{{"type", "partial_cardinal"}},
                                     json{{"type", "token_count"}, {"min", 2u}, {"max", 4u}}})}};
  auto both = rule_from_json(all);
  CHECK(check(itn::apply_itn("500 mg"), both).passed);
  CHECK_FALSE(check(itn::apply_itn("500"), both).passed);
}

TEST_CASE("unknown pattern ids and malformed composites fail at load time") {
  CHECK_THROWS_AS(rule_from_json(json{{"type", "pattern"}, {"pattern", "no-such"}}),
                  ConfigError);
  CHECK_THROWS_AS(rule_from_json(json{{"type", "all_of"}, {"rules", json::array()}}),
                  ConfigError);
  CHECK_THROWS_AS(rule_from_json(json{{"type", "mystery"}}), ConfigError);
  CHECK(known_pattern("phone"));
  CHECK_FALSE(known_pattern("no-such"));
}

TEST_CASE("gazetteer-backed NER kinds degrade gracefully") {
  SlotRegistry reg = testutil::fixture_registry();
  auto customer = reg.lookup("Customer Name");
  REQUIRE(customer.has_value());
  auto person = kind_rule("person");
  CHECK(check(itn::apply_itn("John Doe"), person, &*customer).passed);
  CHECK_FALSE(check(itn::apply_itn("umm"), person, &*customer).passed);
  // No gazetteer context: open-world pass with an explanatory reason.
  auto verdict = check(itn::apply_itn("anyone"), person, nullptr);
  CHECK(verdict.passed);
  CHECK_FALSE(verdict.reason.empty());
}

TEST_CASE("filter_frame keeps values passing all label constraints") {
  SlotRegistry reg = testutil::fixture_registry();
  SlotFrame frame;
  frame.add("Account Number", "123456");
  frame.add("Account Number", "my account");

  auto result = filter_frame(frame, reg);
  REQUIRE(result.frame.entries.count("Account Number") == 1);
  CHECK(result.frame.entries.at("Account Number") == std::vector<std::string>{"123456"});
  size_t fails = 0;
  for (const auto& v : result.verdicts) {
    if (!v.passed) ++fails;
  }
  CHECK(fails == 1);
}

TEST_CASE("filter_frame leaves unconstrained and unknown labels untouched") {
  SlotRegistry reg;
  reg.register_label("Free Label");
  SlotFrame frame;
  frame.add("Free Label", "anything goes");
  frame.add("Unknown Label", "also kept");

  auto result = filter_frame(frame, reg);
  CHECK(result.frame == frame);
  for (const auto& v : result.verdicts) CHECK(v.passed);
}

TEST_CASE("filter_frame on an empty frame") {
  SlotRegistry reg = testutil::fixture_registry();
  auto result = filter_frame(SlotFrame{}, reg);
  CHECK(result.frame.empty());
  CHECK(result.verdicts.empty());
}

TEST_CASE("filter_frame subset, idempotence and pass-through properties") {
  SlotRegistry reg = testutil::fixture_registry();
  std::vector<std::string> labels = reg.labels();
  labels.push_back("Unknown Label");  // open-world path
  SplitMix64 rng(0xf17e5);

  for (int i = 0; i < 2000; ++i) {
    SlotFrame frame = random_frame(&rng, labels);
    auto once = filter_frame(frame, reg);
    CHECK(frame_subset(once.frame, frame));
    auto twice = filter_frame(once.frame, reg);
    CHECK(twice.frame == once.frame);
  }

  // A frame whose values all satisfy their labels' constraints is unchanged.
  SlotFrame good;
  good.add("Account Number", "123456");
  good.add("Email", "jane.doe@mail.com");
  good.add("Appointment Time", "7 PM");
  good.add("Dosage", "500 mg");
  good.add("Plan Type", "premium plan");
  auto result = filter_frame(good, reg);
  CHECK(result.frame == good);
}
