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
// Black-box teacher loop: renders annotation prompts, parses teacher
// responses back into per-turn frames, and feeds induced labels into the
// registry.

#ifndef SLOTFILL_ANNOTATE_H_
#define SLOTFILL_ANNOTATE_H_

#include <string>
#include <vector>

#include "slotfill/backend.h"
#include "slotfill/model.h"
#include "slotfill/registry.h"

namespace slotfill::annotate {

struct AnnotationRequest {
  std::string prompt;
  std::string transcript_id;
  std::vector<std::string> seed_labels;  // canonical, as rendered into the prompt
};

// Renders the annotation template with {labels} = comma-joined canonical
// labels and {text} = "Agent says:"/"Customer says:" lines in turn order.
AnnotationRequest build_annotation_prompt(const Transcript& transcript,
                                          const std::vector<std::string>& labels);

struct ParsedAnnotation {
  AnnotatedTranscript annotated;          // source = Teacher
  std::vector<std::string> induced;       // canonical labels not yet registered
  std::vector<std::string> warnings;
};

// Maps response keys back to turns by normalized text (exact match, then a
// longest-common-prefix fallback for truncated keys), repairs malformed
// fragments, drops NA entries, and canonicalizes labels. Throws
// AnnotationParseError when nothing in the response matches any turn.
ParsedAnnotation parse_annotation_response(const std::string& raw,
                                           const Transcript& transcript,
                                           const SlotRegistry& registry);

struct AnnotateOptions {
  int max_tokens = 512;
  double temperature = 0.0;
  // Cap on how many registry labels are offered in the prompt; 0 = all.
  size_t label_cap = 0;
};

// Full loop for one transcript: prompt -> backend -> parse -> register
// induced labels (Extractive by default).
ParsedAnnotation annotate_transcript(const Transcript& transcript, SlotRegistry& registry,
                                     GenerationBackend& backend,
                                     const AnnotateOptions& options = {});

}  // namespace slotfill::annotate

#endif  // SLOTFILL_ANNOTATE_H_
