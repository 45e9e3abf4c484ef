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
#include <set>
#include <tuple>

#include <doctest.h>

#include "slotfill/errors.h"
#include "slotfill/instructgen.h"
#include "test_util.h"

using namespace slotfill;
using namespace slotfill::instructgen;

namespace {

AnnotatedTranscript first_fixture() { return testutil::fixture_gold().front(); }

GenConfig tiny_config() {
  GenConfig c;
  c.seed = 7;
  c.samples_per_turn = 1;
  return c;
}

}  // namespace

TEST_CASE("anchor at turn 0 clamps the context to empty") {
  GenConfig config = tiny_config();
  config.context_len_range = {0, 0};
  config.text_len_range = {1, 1};
  SlotRegistry reg = testutil::fixture_registry();
  InstructionSample s = build_sample(first_fixture(), 0, config, 0, reg);
  CHECK(s.context_turns.empty());
  REQUIRE(s.text_turns.size() == 1);
  CHECK(s.text_turns[0].index == 0);
}

TEST_CASE("targets equal the window frame labels and the completion equals the frame") {
  GenConfig config = tiny_config();
  config.text_len_range = {1, 1};
  SlotRegistry reg = testutil::fixture_registry();
  const AnnotatedTranscript doc = first_fixture();
  // Turn 1 of the fixture carries the three worked-example labels.
  InstructionSample s = build_sample(doc, 1, config, 0, reg);
  CHECK(s.target_labels == std::vector<std::string>{"Account Number", "Customer Name",
                                                    "Reason For Call"});
  CHECK(s.completion.entries == doc.frames.at(1).entries);
}

TEST_CASE("identical (seed, id, anchor, draw) produce byte-identical prompts") {
  SlotRegistry reg = testutil::fixture_registry();
  GenConfig config;
  config.seed = 42;
  const AnnotatedTranscript doc = first_fixture();
  InstructionSample a = build_sample(doc, 4, config, 1, reg);
  InstructionSample b = build_sample(doc, 4, config, 1, reg);
  CHECK(a.rendered == b.rendered);
  CHECK(a.instruction == b.instruction);
  CHECK(a.response == b.response);
}

TEST_CASE("the rendered sample carries the template framing") {
  SlotRegistry reg = testutil::fixture_registry();
  InstructionSample s = build_sample(first_fixture(), 1, tiny_config(), 0, reg);
  CHECK(s.rendered.find("Main text: ") != std::string::npos);
  CHECK(s.rendered.find("```") != std::string::npos);
  CHECK(s.rendered.find("<s>[INST]<<SYS>>") != std::string::npos);
  CHECK(s.rendered.find("[/INST]") != std::string::npos);
  CHECK(s.rendered.find("You are an honest and helpful information extractor.") !=
        std::string::npos);
  // instruction = between the tags; response = completion JSON
  CHECK(s.instruction.find("[INST]") == std::string::npos);
  CHECK(s.rendered.find(s.response) != std::string::npos);
}

TEST_CASE("sample counting: samples_per_turn per turn") {
  SlotRegistry reg = testutil::fixture_registry();
  std::vector<AnnotatedTranscript> corpus = {first_fixture()};
  REQUIRE(corpus[0].transcript.turns.size() == 10);

  GenConfig one = tiny_config();
  GenStats stats;
  auto samples = generate_dataset(corpus, one, reg, &stats);
  CHECK(samples.size() == 10);
  CHECK(stats.samples == 10);

  GenConfig three = tiny_config();
  three.samples_per_turn = 3;
  auto more = generate_dataset(corpus, three, reg);
  CHECK(more.size() == 30);

  // Per anchor, the three draws rarely agree on every randomized dimension.
  size_t all_same = 0;
  for (size_t anchor = 0; anchor < 10; ++anchor) {
    const auto& a = more[anchor * 3 + 0];
    const auto& b = more[anchor * 3 + 1];
    const auto& c = more[anchor * 3 + 2];
    auto dims = [](const InstructionSample& s) {
      return std::make_tuple(s.context_turns.size(), s.text_turns.size(),
                             s.distractor_labels);
    };
    if (dims(a) == dims(b) && dims(b) == dims(c)) ++all_same;
  }
  CHECK(all_same <= 2);
}

TEST_CASE("turns with no slots in the window emit an abstention completion") {
  SlotRegistry reg = testutil::fixture_registry();
  GenConfig config = tiny_config();
  config.text_len_range = {1, 1};
  config.context_len_range = {0, 0};
  // Fixture turn 2 of tx-telecom-1 has no frame.
  InstructionSample s = build_sample(first_fixture(), 2, config, 0, reg);
  CHECK(s.target_labels.empty());
  CHECK(s.response == "{}");
  CHECK_FALSE(s.distractor_labels.empty());
}

TEST_CASE("distractor shortfalls emit a warning counter, not an abort") {
  SlotRegistry tiny;
  tiny.register_label("Customer Name");
  GenConfig config = tiny_config();
  config.distractor_count_range = {3, 3};
  GenStats stats;
  InstructionSample s = build_sample(first_fixture(), 1, config, 0, tiny, &stats);
  CHECK(s.distractor_labels.size() < 3);
  CHECK(stats.distractor_shortfalls == 1);
}

TEST_CASE("dataset-wide invariants hold for every sample") {
  SlotRegistry reg = testutil::fixture_registry();
  const std::set<std::string> registry_labels = [&] {
    auto l = reg.labels();
    return std::set<std::string>(l.begin(), l.end());
  }();
  GenConfig config;
  config.seed = 11;
  config.samples_per_turn = 3;

  auto corpus = testutil::fixture_gold();
  GenStats stats;
  size_t checked = 0;
  generate_dataset(
      corpus, config, reg,
      [&](const InstructionSample& s) {
        ++checked;
        // distractors never overlap targets
        for (const std::string& d : s.distractor_labels) {
          CHECK(std::find(s.target_labels.begin(), s.target_labels.end(), d) ==
                s.target_labels.end());
          CHECK(registry_labels.count(d) == 1);
        }
        // context strictly precedes text
        if (!s.context_turns.empty()) {
          CHECK(s.context_turns.back().index + 1 == s.text_turns.front().index);
        }
        REQUIRE(!s.text_turns.empty());
        for (size_t i = 1; i < s.text_turns.size(); ++i) {
          CHECK(s.text_turns[i].index == s.text_turns[i - 1].index + 1);
        }
        // completion labels == target labels
        std::vector<std::string> completion_labels;
        for (const auto& [label, values] : s.completion.entries) {
          completion_labels.push_back(label);
        }
        CHECK(completion_labels == s.target_labels);
      },
      &stats);
  CHECK(checked == stats.samples);
  CHECK(stats.samples == 60 * 3);
}

TEST_CASE("the full dataset is a pure function of corpus and config") {
  SlotRegistry reg = testutil::fixture_registry();
  auto corpus = testutil::fixture_gold();
  GenConfig config;
  config.seed = 5;
  config.samples_per_turn = 2;
  auto a = generate_dataset(corpus, config, reg);
  auto b = generate_dataset(corpus, config, reg);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(sample_to_json_line(a[i]) == sample_to_json_line(b[i]));
  }
}

TEST_CASE("config validation rejects malformed ranges") {
  GenConfig bad;
  bad.text_len_range = {0, 2};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  GenConfig inverted;
  inverted.context_len_range = {4, 1};
  CHECK_THROWS_AS(inverted.validate(), ValidationError);
  GenConfig zero;
  zero.samples_per_turn = 0;
  CHECK_THROWS_AS(zero.validate(), ValidationError);
}
