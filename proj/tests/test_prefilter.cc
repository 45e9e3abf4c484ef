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

#include "slotfill/prefilter.h"
#include "test_util.h"

using namespace slotfill;
using namespace slotfill::prefilter;

namespace {

bool has_candidate(const std::vector<Candidate>& cs, const std::string& label,
                   const std::string& value) {
  for (const Candidate& c : cs) {
    if (c.label == label && c.value == value) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("reference extractor proposes cardinal values for cardinal-constrained labels") {
  SlotRegistry reg = testutil::fixture_registry();
  auto cs = extract_candidates("the account number is 123456", reg);
  CHECK(has_candidate(cs, "Account Number", "123456"));
}

TEST_CASE("reference extractor on empty input") {
  SlotRegistry reg = testutil::fixture_registry();
  CHECK(extract_candidates("", reg).empty());
}

TEST_CASE("candidates always satisfy span consistency") {
  SlotRegistry reg = testutil::fixture_registry();
  const std::vector<std::string> texts = {
      "reach me at jane.doe@mail.com",
      "the account number is 123456",
      "visit on March fifth at 7 PM costs $50",
      "call 555-123-4567 about the premium plan",
      "take 500 mg for 5 days",
      "Thank you for calling Net Company. How can I assist you today?",
      "no entities at all here",
  };
  for (const std::string& text : texts) {
    for (const Candidate& c : extract_candidates(text, reg)) {
      CAPTURE(text);
      CAPTURE(c.label);
      REQUIRE(c.end <= text.size());
      REQUIRE(c.start < c.end);
      CHECK(text.substr(c.start, c.end - c.start) == c.value);
      CHECK(c.score >= 0.0);
      CHECK(c.score <= 1.0);
    }
  }
}

TEST_CASE("email candidates span exactly the address") {
  SlotRegistry reg = testutil::fixture_registry();
  auto cs = extract_candidates("reach me at jane.doe@mail.com", reg);
  CHECK(has_candidate(cs, "Email", "jane.doe@mail.com"));
}

TEST_CASE("gazetteer candidates fire case-insensitively") {
  SlotRegistry reg = testutil::fixture_registry();
  auto cs = extract_candidates("thank you for calling NET COMPANY today", reg);
  CHECK(has_candidate(cs, "Company Name", "NET COMPANY"));
}

TEST_CASE("detect_abstractive fires on trigger phrases anywhere in the window") {
  SlotRegistry reg = testutil::fixture_registry();
  auto hits = detect_abstractive("My wifi doesn't work", reg);
  CHECK(hits == std::set<std::string>{"Reason For Call"});

  CHECK(detect_abstractive("all good here", reg).empty());

  // Trigger appearing only in the leading (context) part of the window.
  auto ctx_hits = detect_abstractive("I want to cancel that.\nOK, one moment please.", reg);
  CHECK(ctx_hits.count("Reason For Call") == 1);
}

TEST_CASE("narrow_labels keeps only proposed labels, in requested order") {
  std::vector<Candidate> cs = {{"Company Name", "Net Company", 0, 11, 1.0}};
  auto narrowed = narrow_labels({"Company Name", "Claim Number"}, cs, {});
  CHECK(narrowed == std::vector<std::string>{"Company Name"});

  CHECK(narrow_labels({"Company Name", "Claim Number"}, {}, {}).empty());

  auto all = narrow_labels({"Claim Number", "Company Name"}, cs, {"Claim Number"});
  CHECK(all == std::vector<std::string>{"Claim Number", "Company Name"});
}

TEST_CASE("narrow_labels output is a subset and grows monotonically with candidates") {
  SlotRegistry reg = testutil::fixture_registry();
  const std::vector<std::string> requested = reg.labels();
  std::vector<Candidate> cs = {{"Account Number", "42", 0, 2, 0.8}};
  auto before = narrow_labels(requested, cs, {});
  for (const std::string& label : before) {
    CHECK(std::find(requested.begin(), requested.end(), label) != requested.end());
  }
  cs.push_back({"Email", "a@b.co", 3, 9, 0.9});
  auto after = narrow_labels(requested, cs, {});
  for (const std::string& label : before) {
    CHECK(std::find(after.begin(), after.end(), label) != after.end());
  }
  CHECK(after.size() >= before.size());
}

namespace {

// In-process extractor double that reports entities with sloppy offsets.
class FakeExtractor final : public ExtractorBackend {
 public:
  std::vector<Entity> extract(const std::string& text,
                              const std::vector<std::string>& labels) override {
    last_labels = labels;
    std::vector<Entity> out;
    size_t pos = text.find("123456");
    if (pos != std::string::npos) {
      out.push_back({"account number", "123456", 0, 0, 0.95});  // offsets wrong on purpose
    }
    return out;
  }
  std::string name() const override { return "fake"; }
  std::vector<std::string> last_labels;
};

}  // namespace

TEST_CASE("backend extraction canonicalizes labels and re-anchors sloppy spans") {
  SlotRegistry reg = testutil::fixture_registry();
  FakeExtractor fake;
  const std::string text = "the account number is 123456";
  auto cs = extract_candidates(text, reg, fake);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].label == "Account Number");
  CHECK(text.substr(cs[0].start, cs[0].end - cs[0].start) == cs[0].value);
  // Only extractive labels are offered to the backend.
  for (const std::string& l : fake.last_labels) CHECK(l != "Reason For Call");
}
