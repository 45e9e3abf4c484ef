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

#include "slotfill/instructgen.h"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "slotfill/errors.h"
#include "slotfill/label.h"
#include "slotfill/prompts.h"
#include "slotfill/rng.h"
#include "slotfill/text_norm.h"

namespace slotfill::instructgen {

using nlohmann::json;

namespace {

uint64_t stream_key(uint64_t seed, const std::string& transcript_id, int anchor, int draw) {
  uint64_t h = fnv1a_u64(seed, 0xcbf29ce484222325ULL);
  h = fnv1a(transcript_id, h);
  h = fnv1a_u64(static_cast<uint64_t>(anchor), h);
  h = fnv1a_u64(static_cast<uint64_t>(draw), h);
  return h;
}

std::string completion_json(const SlotFrame& frame) {
  json obj = json::object();
  for (const auto& [label, values] : frame.entries) obj[label] = values;
  return obj.dump();
}

}  // namespace

void GenConfig::validate() const {
  auto check_range = [](std::pair<int, int> r, int floor, const char* name) {
    if (r.first < floor || r.second < r.first) {
      throw ValidationError(std::string(name) + " range [" + std::to_string(r.first) + "," +
                            std::to_string(r.second) + "] is invalid");
    }
  };
  check_range(context_len_range, 0, "context_len");
  check_range(text_len_range, 1, "text_len");
  check_range(distractor_count_range, 0, "distractor_count");
  if (samples_per_turn < 1) throw ValidationError("samples_per_turn must be >= 1");
}

InstructionSample build_sample(const AnnotatedTranscript& annotated, int anchor_turn,
                               const GenConfig& config, int draw, const SlotRegistry& registry,
                               GenStats* stats) {
  const std::vector<Turn>& turns = annotated.transcript.turns;
  if (anchor_turn < 0 || anchor_turn >= static_cast<int>(turns.size())) {
    throw ValidationError("anchor turn " + std::to_string(anchor_turn) + " out of range");
  }

  SplitMix64 rng(stream_key(config.seed, annotated.transcript.id, anchor_turn, draw));
  const int text_len_drawn = rng.next_in(config.text_len_range.first, config.text_len_range.second);
  const int ctx_len_drawn =
      rng.next_in(config.context_len_range.first, config.context_len_range.second);
  const int n_distractors =
      rng.next_in(config.distractor_count_range.first, config.distractor_count_range.second);

  // Text window ends at the anchor; both windows clamp at transcript start.
  const int text_end = anchor_turn + 1;
  const int text_begin = std::max(0, text_end - text_len_drawn);
  const int ctx_begin = std::max(0, text_begin - ctx_len_drawn);

  InstructionSample sample;
  sample.domain = annotated.transcript.domain;
  sample.context_turns.assign(turns.begin() + ctx_begin, turns.begin() + text_begin);
  sample.text_turns.assign(turns.begin() + text_begin, turns.begin() + text_end);

  SlotFrame window;
  for (int i = text_begin; i < text_end; ++i) {
    auto it = annotated.frames.find(i);
    if (it != annotated.frames.end()) window = merge_frames(window, it->second);
  }
  sample.completion = window;
  for (const auto& [label, values] : window.entries) sample.target_labels.push_back(label);

  std::set<std::string> taken(sample.target_labels.begin(), sample.target_labels.end());
  std::vector<std::string> eligible;
  for (const std::string& label : registry.labels()) {
    if (!taken.count(label)) eligible.push_back(label);
  }
  // Uniform draw without replacement (partial Fisher-Yates).
  const int want = std::min<int>(n_distractors, static_cast<int>(eligible.size()));
  for (int i = 0; i < want; ++i) {
    int j = rng.next_in(i, static_cast<int>(eligible.size()) - 1);
    std::swap(eligible[static_cast<size_t>(i)], eligible[static_cast<size_t>(j)]);
    sample.distractor_labels.push_back(eligible[static_cast<size_t>(i)]);
  }
  if (want < n_distractors && stats != nullptr) ++stats->distractor_shortfalls;

  std::vector<std::string> all_labels = sample.target_labels;
  all_labels.insert(all_labels.end(), sample.distractor_labels.begin(),
                    sample.distractor_labels.end());

  const std::string context =
      prompts::dialogue_block(turns, static_cast<size_t>(ctx_begin),
                              static_cast<size_t>(text_begin));
  const std::string main_text =
      prompts::dialogue_block(turns, static_cast<size_t>(text_begin),
                              static_cast<size_t>(text_end));
  sample.response = completion_json(sample.completion);
  sample.rendered =
      prompts::training_prompt(join(all_labels, ", "), context, main_text, sample.response);
  sample.instruction = prompts::instruction_of(sample.rendered);

  if (stats != nullptr) {
    ++stats->samples;
    for (const std::string& label : sample.target_labels) ++stats->label_histogram[label];
  }
  return sample;
}

void generate_dataset(const std::vector<AnnotatedTranscript>& corpus, const GenConfig& config,
                      const SlotRegistry& registry,
                      const std::function<void(const InstructionSample&)>& sink,
                      GenStats* stats) {
  config.validate();
  if (corpus.empty()) throw ValidationError("corpus is empty");
  for (const AnnotatedTranscript& doc : corpus) {
    for (const Turn& turn : doc.transcript.turns) {
      for (int draw = 0; draw < config.samples_per_turn; ++draw) {
        sink(build_sample(doc, turn.index, config, draw, registry, stats));
      }
    }
  }
}

std::vector<InstructionSample> generate_dataset(const std::vector<AnnotatedTranscript>& corpus,
                                                const GenConfig& config,
                                                const SlotRegistry& registry, GenStats* stats) {
  std::vector<InstructionSample> out;
  generate_dataset(corpus, config, registry,
                   [&out](const InstructionSample& s) { out.push_back(s); }, stats);
  return out;
}

std::string sample_to_json_line(const InstructionSample& sample) {
  json j = {{"instruction", sample.instruction}, {"response", sample.response}};
  return j.dump();
}

}  // namespace slotfill::instructgen
