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

#include <unistd.h>

#include <cstdio>
#include <fstream>

#include <doctest.h>

#include "slotfill/errors.h"
#include "slotfill/model.h"
#include "test_util.h"

using namespace slotfill;

namespace {

std::string temp_path(const std::string& stem) {
  return std::string("/tmp/slotfill_test_") + stem + "_" + std::to_string(::getpid());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << content;
}

Transcript small_transcript() {
  Transcript t;
  t.id = "t1";
  t.domain = "telecom";
  t.turns = {{0, Speaker::Agent, "Hello, how can I help?"},
             {1, Speaker::Customer, "My wifi doesn't work."}};
  return t;
}

}  // namespace

TEST_CASE("load_transcripts reads well-formed lines in order") {
  const std::string path = temp_path("load_ok");
  Transcript a = small_transcript();
  Transcript b = small_transcript();
  b.id = "t2";
  write_file(path, transcript_to_json_line(a) + "\n" + transcript_to_json_line(b) + "\n");

  auto result = load_transcripts(path);
  CHECK(result.items.size() == 2);
  CHECK(result.diagnostics.empty());
  CHECK(result.items[0].id == "t1");
  CHECK(result.items[1].id == "t2");
  std::remove(path.c_str());
}

TEST_CASE("load_transcripts on an empty file") {
  const std::string path = temp_path("load_empty");
  write_file(path, "");
  auto result = load_transcripts(path);
  CHECK(result.items.empty());
  CHECK(result.diagnostics.empty());
  std::remove(path.c_str());
}

TEST_CASE("load_transcripts records a diagnostic for a truncated line") {
  const std::string path = temp_path("load_trunc");
  const std::string good = transcript_to_json_line(small_transcript());
  const std::string truncated = good.substr(0, good.size() / 2);
  write_file(path, good + "\n" + truncated + "\n");

  auto result = load_transcripts(path);
  CHECK(result.items.size() == 1);
  REQUIRE(result.diagnostics.size() == 1);
  CHECK(result.diagnostics[0].line == 2);
  std::remove(path.c_str());
}

TEST_CASE("load_transcripts throws IoError for a missing file") {
  CHECK_THROWS_AS(load_transcripts("/nonexistent/nope.jsonl"), IoError);
}

TEST_CASE("serialize/parse round trip is the identity on the fixture corpus") {
  const std::string path = temp_path("roundtrip");
  auto docs = testutil::fixture_gold();
  REQUIRE(!docs.empty());
  save_annotated(docs, path);
  auto reloaded = load_annotated(path);
  CHECK(reloaded.diagnostics.empty());
  REQUIRE(reloaded.items.size() == docs.size());
  for (size_t i = 0; i < docs.size(); ++i) {
    CHECK(reloaded.items[i] == docs[i]);
  }
  std::remove(path.c_str());
}

TEST_CASE("merged documents round trip through the file format") {
  AnnotatedTranscript doc;
  doc.transcript = small_transcript();
  doc.source = AnnotationSource::Merged;
  doc.frames[1].add("Reason For Call", "wifi doesn't work");
  const std::string line = annotated_to_json_line(doc);
  const std::string path = temp_path("merged_rt");
  write_file(path, line + "\n");
  auto reloaded = load_annotated(path);
  REQUIRE(reloaded.items.size() == 1);
  CHECK(reloaded.items[0] == doc);
  std::remove(path.c_str());
}

TEST_CASE("merge_annotations: union with empty frame") {
  AnnotatedTranscript teacher, human;
  teacher.transcript = small_transcript();
  human.transcript = small_transcript();
  human.source = AnnotationSource::Human;
  teacher.frames[1].add("Account Number", "123456");

  auto merged = merge_annotations(teacher, human);
  CHECK(merged.source == AnnotationSource::Merged);
  REQUIRE(merged.frames.count(1) == 1);
  CHECK(merged.frames[1].entries.at("Account Number") ==
        std::vector<std::string>{"123456"});
}

TEST_CASE("merge_annotations: distinct labels on the same turn are united") {
  AnnotatedTranscript teacher, human;
  teacher.transcript = small_transcript();
  human.transcript = small_transcript();
  teacher.frames[1].add("Reason for call", "wifi doesn't work");
  human.frames[1].add("Customer Name", "John Doe");

  auto merged = merge_annotations(teacher, human);
  REQUIRE(merged.frames.count(1) == 1);
  CHECK(merged.frames[1].entries.size() == 2);
  CHECK(merged.frames[1].entries.count("Reason For Call") == 1);
  CHECK(merged.frames[1].entries.count("Customer Name") == 1);
}

TEST_CASE("merge_annotations dedups on the normalized form, keeping first surface") {
  AnnotatedTranscript teacher, human;
  teacher.transcript = small_transcript();
  human.transcript = small_transcript();
  teacher.frames[0].add("Company Name", "Net Company");
  human.frames[0].add("company name", "net company");

  auto merged = merge_annotations(teacher, human);
  REQUIRE(merged.frames.count(0) == 1);
  REQUIRE(merged.frames[0].entries.size() == 1);
  const auto& values = merged.frames[0].entries.at("Company Name");
  REQUIRE(values.size() == 1);
  CHECK(values[0] == "Net Company");
}

TEST_CASE("merge_annotations rejects mismatched transcript ids") {
  AnnotatedTranscript teacher, human;
  teacher.transcript = small_transcript();
  human.transcript = small_transcript();
  human.transcript.id = "other";
  CHECK_THROWS_AS(merge_annotations(teacher, human), ValidationError);
}

TEST_CASE("merge_annotations is commutative up to value order and idempotent") {
  AnnotatedTranscript teacher, human;
  teacher.transcript = small_transcript();
  human.transcript = small_transcript();
  teacher.frames[0].add("Company Name", "Net Company");
  teacher.frames[1].add("Reason For Call", "wifi doesn't work");
  human.frames[1].add("Reason For Call", "WIFI doesn't work!");
  human.frames[1].add("Customer Name", "John Doe");

  auto ab = merge_annotations(teacher, human);
  auto ba = merge_annotations(human, teacher);
  REQUIRE(ab.frames.size() == ba.frames.size());
  for (const auto& [idx, frame] : ab.frames) {
    REQUIRE(ba.frames.count(idx) == 1);
    CHECK(frame.entries.size() == ba.frames.at(idx).entries.size());
    for (const auto& [label, values] : frame.entries) {
      CHECK(ba.frames.at(idx).entries.at(label).size() == values.size());
    }
  }

  auto self = merge_annotations(teacher, teacher);
  AnnotatedTranscript empty;
  empty.transcript = teacher.transcript;
  auto baseline = merge_annotations(teacher, empty);
  CHECK(self.frames == baseline.frames);
}

TEST_CASE("frames with NA or empty values are rejected on load") {
  const std::string path = temp_path("na_reject");
  write_file(path,
             R"({"id":"x","domain":"d","turns":[{"speaker":"agent","text":"hi"}],)"
             R"("frames":{"0":{"Label":["NA"]}},"source":"teacher"})"
             "\n");
  auto result = load_annotated(path);
  CHECK(result.items.empty());
  CHECK(result.diagnostics.size() == 1);
  std::remove(path.c_str());
}
