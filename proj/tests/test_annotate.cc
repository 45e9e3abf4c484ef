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

#include "slotfill/annotate.h"
#include "slotfill/errors.h"
#include "test_util.h"

using namespace slotfill;
using namespace slotfill::annotate;

namespace {

Transcript example_transcript() {
  Transcript t;
  t.id = "ex-2";
  t.domain = "telecom";
  t.turns = {
      {0, Speaker::Agent, "Thank you for calling Net Company. How can I assist you today?"},
      {1, Speaker::Customer,
       "Yes, uh I'm John Doe, and the account number is 123456. My wifi doesn't work."},
  };
  return t;
}

}  // namespace

TEST_CASE("annotation prompt renders the template with labels and speaker lines") {
  AnnotationRequest req =
      build_annotation_prompt(example_transcript(), {"Company Name"});
  CHECK(req.transcript_id == "ex-2");
  CHECK(req.prompt.find("You are an expert in Natural Language Processing.") !=
        std::string::npos);
  CHECK(req.prompt.find("here is the list of slot types available to you: Company Name.") !=
        std::string::npos);
  CHECK(req.prompt.find(
            "Agent says: Thank you for calling Net Company. How can I assist you today?") !=
        std::string::npos);
  CHECK(req.prompt.find("Customer says: Yes, uh I'm John Doe") != std::string::npos);
  CHECK(req.prompt.find("return NA") != std::string::npos);
}

TEST_CASE("annotation prompt with an empty label list keeps the template intact") {
  AnnotationRequest req = build_annotation_prompt(example_transcript(), {});
  CHECK(req.seed_labels.empty());
  CHECK(req.prompt.find("available to you: .") != std::string::npos);
  CHECK(req.prompt.find("Dialogue Text: ") != std::string::npos);
}

TEST_CASE("annotation prompt lists each seed label exactly once, in turn order") {
  AnnotationRequest req = build_annotation_prompt(
      example_transcript(), {"Company Name", "company name", "Account Number"});
  CHECK(req.seed_labels ==
        std::vector<std::string>{"Company Name", "Account Number"});
  size_t first = req.prompt.find("Company Name");
  size_t second = req.prompt.find("Company Name", first + 1);
  CHECK(first != std::string::npos);
  CHECK(second == std::string::npos);

  const size_t agent_line = req.prompt.find("Agent says:");
  const size_t customer_line = req.prompt.find("Customer says:");
  REQUIRE(agent_line != std::string::npos);
  REQUIRE(customer_line != std::string::npos);
  CHECK(agent_line < customer_line);
}

TEST_CASE("parse_annotation_response maps the worked example onto its turn") {
  SlotRegistry reg;
  reg.register_label("Customer Name");
  reg.register_label("Account Number");
  reg.register_label("Reason For Call", SlotKind::Abstractive);

  const std::string raw = R"({
    "Thank you for calling Net Company. How can I assist you today?": "NA",
    "Yes, uh I'm John Doe, and the account number is 123456. My wifi doesn't work.": {
      "Customer Name": "John Doe",
      "Account Number": "123456",
      "Reason for call": "wifi doesn't work"
    }
  })";
  ParsedAnnotation parsed = parse_annotation_response(raw, example_transcript(), reg);
  CHECK(parsed.annotated.frames.count(0) == 0);  // NA maps to absence
  REQUIRE(parsed.annotated.frames.count(1) == 1);
  const SlotFrame& frame = parsed.annotated.frames.at(1);
  CHECK(frame.entries.size() == 3);
  CHECK(frame.entries.at("Customer Name") == std::vector<std::string>{"John Doe"});
  CHECK(frame.entries.at("Account Number") == std::vector<std::string>{"123456"});
  CHECK(frame.entries.at("Reason For Call") ==
        std::vector<std::string>{"wifi doesn't work"});
  CHECK(parsed.induced.empty());
}

TEST_CASE("unseen labels come back as canonicalized induced labels") {
  SlotRegistry reg;
  reg.register_label("Customer Name");
  const std::string raw =
      R"({"Yes, uh I'm John Doe, and the account number is 123456. My wifi doesn't work.":
          {"shipping address": "12 Elm Street"}})";
  ParsedAnnotation parsed = parse_annotation_response(raw, example_transcript(), reg);
  CHECK(parsed.induced == std::vector<std::string>{"Shipping Address"});
  // induced ∩ registry = ∅
  for (const std::string& label : parsed.induced) CHECK_FALSE(reg.contains(label));
}

TEST_CASE("truncated response keys fall back to prefix matching") {
  SlotRegistry reg;
  const std::string raw =
      R"({"Yes, uh I'm John Doe, and the account number is 123456. My wifi doesn":
          {"Customer Name": "John Doe"}})";
  ParsedAnnotation parsed = parse_annotation_response(raw, example_transcript(), reg);
  REQUIRE(parsed.annotated.frames.count(1) == 1);
}

TEST_CASE("every frame refers to a real turn and parsing is deterministic") {
  SlotRegistry reg;
  const std::string raw =
      R"({"Thank you for calling Net Company. How can I assist you today?":
            {"Company Name": ["Net Company"]},
          "something the teacher hallucinated entirely": {"X": "y"}})";
  ParsedAnnotation first = parse_annotation_response(raw, example_transcript(), reg);
  ParsedAnnotation second = parse_annotation_response(raw, example_transcript(), reg);
  CHECK(first.annotated.frames == second.annotated.frames);
  CHECK(first.induced == second.induced);
  CHECK(first.warnings.size() == 1);  // the hallucinated line
  for (const auto& [idx, frame] : first.annotated.frames) {
    CHECK(idx >= 0);
    CHECK(idx < static_cast<int>(example_transcript().turns.size()));
  }
}

TEST_CASE("a response matching no turn raises a parse error with diagnostics") {
  SlotRegistry reg;
  CHECK_THROWS_AS(
      parse_annotation_response(R"({"unrelated": {"A": "b"}})", example_transcript(), reg),
      AnnotationParseError);
  CHECK_THROWS_AS(
      parse_annotation_response("not even json", example_transcript(), reg),
      AnnotationParseError);
}

TEST_CASE("annotate_transcript drives the replay backend and registers induced labels") {
  SlotRegistry reg;
  reg.register_label("Company Name");

  Transcript t = example_transcript();
  AnnotationRequest req = build_annotation_prompt(t, reg.labels());
  ReplayBackend replay;
  replay.add(req.prompt, R"({
    "Thank you for calling Net Company. How can I assist you today?":
      {"Company Name": "Net Company"},
    "Yes, uh I'm John Doe, and the account number is 123456. My wifi doesn't work.":
      {"Customer Name": "John Doe", "Account Number": "123456"}
  })");

  ParsedAnnotation parsed = annotate_transcript(t, reg, replay);
  CHECK(parsed.annotated.source == AnnotationSource::Teacher);
  CHECK(parsed.annotated.frames.size() == 2);
  CHECK(parsed.induced.size() == 2);
  CHECK(reg.contains("Customer Name"));
  CHECK(reg.contains("Account Number"));
  CHECK(reg.size() == 3);
}

TEST_CASE("scalar values are promoted to single-element lists") {
  SlotRegistry reg;
  const std::string raw =
      R"({"Thank you for calling Net Company. How can I assist you today?":
          {"Company Name": "Net Company", "Branch Count": 12}})";
  ParsedAnnotation parsed = parse_annotation_response(raw, example_transcript(), reg);
  const SlotFrame& frame = parsed.annotated.frames.at(0);
  CHECK(frame.entries.at("Company Name") == std::vector<std::string>{"Net Company"});
  CHECK(frame.entries.at("Branch Count") == std::vector<std::string>{"12"});
}
