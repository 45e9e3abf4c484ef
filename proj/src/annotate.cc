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

#include "slotfill/annotate.h"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "slotfill/errors.h"
#include "slotfill/json_repair.h"
#include "slotfill/label.h"
#include "slotfill/prompts.h"
#include "slotfill/text_norm.h"

namespace slotfill::annotate {

using nlohmann::json;

namespace {

std::string norm_text(const std::string& s) {
  return to_lower_ascii(collapse_whitespace(s));
}

// Response keys are matched to turns on whitespace-collapsed text; teachers
// truncate long turns, so fall back to a shared prefix covering at least 80%
// of the turn.
int match_turn(const std::string& key, const std::vector<Turn>& turns) {
  const std::string k = norm_text(prompts::strip_role_prefix(trim(key)));
  if (k.empty()) return -1;
  for (const Turn& t : turns) {
    if (norm_text(t.text) == k) return t.index;
  }
  int best = -1;
  size_t best_len = 0;
  for (const Turn& t : turns) {
    const std::string full = norm_text(t.text);
    size_t common = 0;
    while (common < full.size() && common < k.size() && full[common] == k[common]) ++common;
    if (common * 10 >= full.size() * 8 && common > best_len && common > 0) {
      best_len = common;
      best = t.index;
    }
  }
  return best;
}

bool na_like(const std::string& s) {
  const std::string t = to_lower_ascii(trim(s));
  return t.empty() || t == "na" || t == "n/a" || t == "null";
}

void add_entry(SlotFrame* frame, const std::string& raw_label, const json& value,
               std::vector<std::string>* warnings) {
  std::string label;
  try {
    label = canonicalize_label(raw_label);
  } catch (const ValidationError&) {
    warnings->push_back("dropped entry with empty label");
    return;
  }
  auto push = [&](const json& v) {
    std::string s;
    if (v.is_string()) s = v.get<std::string>();
    else if (v.is_number_integer()) s = std::to_string(v.get<long long>());
    else if (v.is_number()) s = v.dump();
    else return;
    if (!na_like(s)) frame->add(label, trim(s));
  };
  if (value.is_array()) {
    for (const json& v : value) push(v);
  } else {
    push(value);
  }
}

}  // namespace

AnnotationRequest build_annotation_prompt(const Transcript& transcript,
                                          const std::vector<std::string>& labels) {
  // Each seed label appears exactly once in the labels slot.
  std::vector<std::string> unique;
  std::set<std::string> seen;
  for (const std::string& raw : labels) {
    const std::string canonical = canonicalize_label(raw);
    if (seen.insert(canonical).second) unique.push_back(canonical);
  }
  AnnotationRequest request;
  request.transcript_id = transcript.id;
  request.seed_labels = unique;
  request.prompt = prompts::annotation_prompt(unique, transcript.turns);
  return request;
}

ParsedAnnotation parse_annotation_response(const std::string& raw,
                                           const Transcript& transcript,
                                           const SlotRegistry& registry) {
  auto j = repair::parse_object_with_repair(raw);
  if (!j) {
    throw AnnotationParseError("teacher response for " + transcript.id +
                               " is not parseable: " + raw.substr(0, 200));
  }

  ParsedAnnotation out;
  out.annotated.transcript = transcript;
  out.annotated.source = AnnotationSource::Teacher;

  size_t matched_keys = 0;
  for (const auto& [key, value] : j->items()) {
    const int turn = match_turn(key, transcript.turns);
    if (turn < 0) {
      out.warnings.push_back("response line matches no turn: \"" + key.substr(0, 80) + "\"");
      continue;
    }
    ++matched_keys;
    if (value.is_string() && na_like(value.get<std::string>())) continue;  // explicit absence
    if (!value.is_object()) {
      out.warnings.push_back("turn " + std::to_string(turn) +
                             ": expected a slot object, got scalar");
      continue;
    }
    SlotFrame frame;
    for (const auto& [label, jv] : value.items()) add_entry(&frame, label, jv, &out.warnings);
    if (frame.empty()) continue;
    auto existing = out.annotated.frames.find(turn);
    if (existing != out.annotated.frames.end()) {
      existing->second = merge_frames(existing->second, frame);
    } else {
      out.annotated.frames[turn] = std::move(frame);
    }
  }
  if (matched_keys == 0) {
    std::string diag = "no response line matches any turn of " + transcript.id;
    for (const std::string& w : out.warnings) diag += "; " + w;
    throw AnnotationParseError(diag);
  }

  std::set<std::string> induced;
  for (const auto& [idx, frame] : out.annotated.frames) {
    for (const auto& [label, values] : frame.entries) {
      if (!registry.contains(label)) induced.insert(label);
    }
  }
  out.induced.assign(induced.begin(), induced.end());
  return out;
}

ParsedAnnotation annotate_transcript(const Transcript& transcript, SlotRegistry& registry,
                                     GenerationBackend& backend,
                                     const AnnotateOptions& options) {
  std::vector<std::string> labels = registry.labels();
  if (options.label_cap > 0 && labels.size() > options.label_cap) {
    labels.resize(options.label_cap);
  }
  AnnotationRequest request = build_annotation_prompt(transcript, labels);
  GenerationResponse response =
      backend.generate({request.prompt, options.max_tokens, options.temperature});
  ParsedAnnotation parsed = parse_annotation_response(response.text, transcript, registry);
  for (const std::string& label : parsed.induced) {
    registry.register_label(label, SlotKind::Extractive);
  }
  return parsed;
}

}  // namespace slotfill::annotate
