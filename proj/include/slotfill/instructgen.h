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
//
// Converts annotated transcripts into the instruction fine-tuning dataset:
// randomized context/text windows around each turn, distractor labels drawn
// from the registry, deterministic under a fixed seed.

#ifndef SLOTFILL_INSTRUCTGEN_H_
#define SLOTFILL_INSTRUCTGEN_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "slotfill/model.h"
#include "slotfill/registry.h"

namespace slotfill::instructgen {

struct GenConfig {
  uint64_t seed = 0;
  std::pair<int, int> context_len_range{0, 6};   // turns
  std::pair<int, int> text_len_range{1, 3};      // turns
  std::pair<int, int> distractor_count_range{1, 5};
  int samples_per_turn = 2;

  void validate() const;  // throws ValidationError
};

struct InstructionSample {
  std::string domain;
  std::vector<Turn> context_turns;  // strictly precede text_turns in the source
  std::vector<Turn> text_turns;
  std::vector<std::string> target_labels;      // exactly the labels in the window's frames
  std::vector<std::string> distractor_labels;  // disjoint from target_labels
  SlotFrame completion;                        // target labels only
  std::string rendered;     // full training prompt including the completion
  std::string instruction;  // between [INST] and [/INST]
  std::string response;     // serialized completion ("{}" when empty)
};

struct GenStats {
  size_t samples = 0;
  size_t distractor_shortfalls = 0;
  std::map<std::string, size_t> label_histogram;  // over target labels
};

// One sample anchored at anchor_turn. Window lengths and the distractor set
// derive deterministically from (seed, transcript id, anchor_turn, draw).
InstructionSample build_sample(const AnnotatedTranscript& annotated, int anchor_turn,
                               const GenConfig& config, int draw, const SlotRegistry& registry,
                               GenStats* stats = nullptr);

// samples_per_turn samples per turn, ordered by (transcript, anchor, draw).
// Bad turns propagate warnings through stats but never abort the stream.
void generate_dataset(const std::vector<AnnotatedTranscript>& corpus, const GenConfig& config,
                      const SlotRegistry& registry,
                      const std::function<void(const InstructionSample&)>& sink,
                      GenStats* stats = nullptr);

std::vector<InstructionSample> generate_dataset(const std::vector<AnnotatedTranscript>& corpus,
                                                const GenConfig& config,
                                                const SlotRegistry& registry,
                                                GenStats* stats = nullptr);

// Output record: {"instruction": ..., "response": ...}
std::string sample_to_json_line(const InstructionSample& sample);

}  // namespace slotfill::instructgen

#endif  // SLOTFILL_INSTRUCTGEN_H_
