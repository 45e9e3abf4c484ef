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
// Online orchestrator: window selection -> prefilter -> prompt -> generative
// backend -> response repair/parsing -> NA elimination -> ITN -> constraints
// -> SlotFrame, with a full audit trail per turn.

#ifndef SLOTFILL_PIPELINE_H_
#define SLOTFILL_PIPELINE_H_

#include <map>
#include <string>
#include <vector>

#include "slotfill/backend.h"
#include "slotfill/constraints.h"
#include "slotfill/evaluation.h"
#include "slotfill/model.h"
#include "slotfill/prefilter.h"
#include "slotfill/registry.h"

namespace slotfill::pipeline {

struct WindowConfig {
  int context_turns = 4;
  int text_turns = 1;
};

struct PipelineConfig {
  WindowConfig window;
  bool narrow_with_prefilter = true;   // off: pass all requested labels through
  bool apply_constraints = true;
  bool pass_through_on_empty_narrow = false;
  double min_candidate_score = 0.0;
  int backend_max_tokens = 512;
  double backend_temperature = 0.0;
  int transport_retries = 1;  // retries on transport error; parse errors never retry
};

struct Session {
  std::string transcript_id;
  std::vector<Turn> history;  // append-only
  WindowConfig window;
  std::vector<std::string> requested_labels;  // canonical
};

enum class TurnStatus { Ok, BackendFailure, ParseFailure };

const char* turn_status_name(TurnStatus s);

struct PipelineResult {
  int turn_index = -1;
  TurnStatus status = TurnStatus::Ok;
  std::string error;
  SlotFrame frame;  // already constraint-filtered
  std::vector<std::string> narrowed_labels;
  std::vector<constraints::ConstraintVerdict> verdicts;
  std::map<std::string, double> timings_ms;  // prefilter/prompt/backend/parse/filter/total
  std::string backend_raw;  // retained whenever a backend was called
  std::vector<std::string> warnings;
};

// Repair-ladder parse of a model response into a frame. Scalars are promoted
// to single-element lists; "NA"/"N/A"/null/"" entries are dropped. Throws
// UnparseableResponseError when no rung yields an object.
SlotFrame parse_model_response(const std::string& raw);

// Serving prompt: the narrowed label set fills the template's label slots
// (no extra distractors at inference), context is the configured number of
// turns before the text window.
std::string build_query_prompt(const Session& session,
                               const std::vector<std::string>& narrowed);

class Pipeline {
 public:
  Pipeline(const SlotRegistry& registry, GenerationBackend& backend, PipelineConfig config,
           prefilter::ExtractorBackend* extractor = nullptr);

  // Appends the turn (its index must equal the current history length) and
  // runs the full stage chain. Backend and parse failures are reported in
  // the result status, never thrown.
  PipelineResult process_turn(Session& session, const Turn& turn) const;

  const PipelineConfig& config() const { return config_; }

 private:
  const SlotRegistry& registry_;
  GenerationBackend& backend_;
  PipelineConfig config_;
  prefilter::ExtractorBackend* extractor_;
};

enum class AblationMode { PrefilterOnly, ConstraintsOnly, Full };

const char* ablation_mode_name(AblationMode m);

// Replays a gold-annotated corpus through the pipeline under one ablation
// mode and scores the outputs against the gold frames.
eval::EvalReport run_ablation(const std::vector<AnnotatedTranscript>& corpus, AblationMode mode,
                              const SlotRegistry& registry, GenerationBackend& backend,
                              PipelineConfig base = {});

}  // namespace slotfill::pipeline

#endif  // SLOTFILL_PIPELINE_H_
