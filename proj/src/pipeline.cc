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

#include "slotfill/pipeline.h"

#include <chrono>

#include <json.hpp>

#include "slotfill/errors.h"
#include "slotfill/itn.h"
#include "slotfill/json_repair.h"
#include "slotfill/label.h"
#include "slotfill/prompts.h"
#include "slotfill/text_norm.h"

namespace slotfill::pipeline {

using nlohmann::json;

namespace {

class StageTimer {
 public:
  explicit StageTimer(std::map<std::string, double>* timings) : timings_(timings) {}

  template <typename Fn>
  auto time(const std::string& stage, Fn&& fn) {
    auto start = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record(stage, start);
    } else {
      auto out = fn();
      record(stage, start);
      return out;
    }
  }

 private:
  void record(const std::string& stage, std::chrono::steady_clock::time_point start) {
    auto end = std::chrono::steady_clock::now();
    (*timings_)[stage] =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(end - start)
            .count();
  }

  std::map<std::string, double>* timings_;
};

bool na_like(const std::string& s) {
  const std::string t = to_lower_ascii(trim(s));
  return t.empty() || t == "na" || t == "n/a" || t == "null";
}

void add_value(SlotFrame* frame, const std::string& label, const json& v) {
  std::string s;
  if (v.is_string()) s = v.get<std::string>();
  else if (v.is_number_integer()) s = std::to_string(v.get<long long>());
  else if (v.is_number()) s = v.dump();
  else if (v.is_boolean()) s = v.get<bool>() ? "true" : "false";
  else return;  // nested objects / null carry no usable value
  if (na_like(s)) return;
  frame->add(label, trim(s));
}

std::string window_text(const std::vector<Turn>& history, size_t begin, size_t end) {
  std::vector<std::string> lines;
  for (size_t i = begin; i < end && i < history.size(); ++i) lines.push_back(history[i].text);
  return join(lines, "\n");
}

}  // namespace

const char* turn_status_name(TurnStatus s) {
  switch (s) {
    case TurnStatus::Ok: return "ok";
    case TurnStatus::BackendFailure: return "backend_error";
    case TurnStatus::ParseFailure: return "parse_error";
  }
  return "ok";
}

const char* ablation_mode_name(AblationMode m) {
  switch (m) {
    case AblationMode::PrefilterOnly: return "prefilter_only";
    case AblationMode::ConstraintsOnly: return "constraints_only";
    case AblationMode::Full: return "full";
  }
  return "full";
}

SlotFrame parse_model_response(const std::string& raw) {
  auto j = repair::parse_object_with_repair(raw);
  if (!j) throw UnparseableResponseError(raw);
  SlotFrame frame;
  for (const auto& [label, value] : j->items()) {
    const std::string key = trim(label);
    if (key.empty()) continue;
    if (value.is_array()) {
      for (const json& v : value) add_value(&frame, key, v);
    } else {
      add_value(&frame, key, value);
    }
  }
  // Drop labels whose values all fell to NA elimination.
  for (auto it = frame.entries.begin(); it != frame.entries.end();) {
    if (it->second.empty()) it = frame.entries.erase(it);
    else ++it;
  }
  return frame;
}

std::string build_query_prompt(const Session& session,
                               const std::vector<std::string>& narrowed) {
  const size_t n = session.history.size();
  const size_t text_len = std::min<size_t>(std::max(session.window.text_turns, 1), n);
  const size_t text_begin = n - text_len;
  const size_t ctx_len =
      std::min<size_t>(std::max(session.window.context_turns, 0), text_begin);
  const size_t ctx_begin = text_begin - ctx_len;

  const std::string context = prompts::dialogue_block(session.history, ctx_begin, text_begin);
  const std::string main_text = prompts::dialogue_block(session.history, text_begin, n);
  return prompts::extraction_prompt(join(narrowed, ", "), context, main_text);
}

Pipeline::Pipeline(const SlotRegistry& registry, GenerationBackend& backend,
                   PipelineConfig config, prefilter::ExtractorBackend* extractor)
    : registry_(registry), backend_(backend), config_(std::move(config)),
      extractor_(extractor) {}

PipelineResult Pipeline::process_turn(Session& session, const Turn& turn) const {
  if (turn.index != static_cast<int>(session.history.size())) {
    throw ValidationError("out-of-order turn " + std::to_string(turn.index) +
                          " for session " + session.transcript_id + " (expected " +
                          std::to_string(session.history.size()) + ")");
  }
  if (trim(turn.text).empty()) {
    throw ValidationError("turn " + std::to_string(turn.index) + " has empty text");
  }

  PipelineResult result;
  result.turn_index = turn.index;
  StageTimer timer(&result.timings_ms);
  auto total_start = std::chrono::steady_clock::now();

  session.history.push_back(turn);
  const size_t n = session.history.size();
  const size_t text_len = std::min<size_t>(std::max(session.window.text_turns, 1), n);
  const size_t text_begin = n - text_len;
  const size_t ctx_len =
      std::min<size_t>(std::max(session.window.context_turns, 0), text_begin);

  const std::string text = window_text(session.history, text_begin, n);
  const std::string context_plus_text =
      window_text(session.history, text_begin - ctx_len, n);

  auto narrowed = timer.time("prefilter", [&] {
    if (!config_.narrow_with_prefilter) return session.requested_labels;
    std::vector<prefilter::Candidate> candidates =
        extractor_ ? prefilter::extract_candidates(text, registry_, *extractor_)
                   : prefilter::extract_candidates(text, registry_);
    if (config_.min_candidate_score > 0.0) {
      std::erase_if(candidates, [&](const prefilter::Candidate& c) {
        return c.score < config_.min_candidate_score;
      });
    }
    auto hits = prefilter::detect_abstractive(context_plus_text, registry_);
    return prefilter::narrow_labels(session.requested_labels, candidates, hits);
  });
  result.narrowed_labels = narrowed;

  if (narrowed.empty() && !config_.pass_through_on_empty_narrow) {
    // Nothing worth asking the model about; skip the backend entirely.
    result.timings_ms["total"] =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(
            std::chrono::steady_clock::now() - total_start)
            .count();
    return result;
  }
  const std::vector<std::string>& ask =
      narrowed.empty() ? session.requested_labels : narrowed;

  const std::string prompt =
      timer.time("prompt", [&] { return build_query_prompt(session, ask); });

  GenerationRequest request{prompt, config_.backend_max_tokens, config_.backend_temperature};
  bool backend_ok = timer.time("backend", [&] {
    for (int attempt = 0; attempt <= config_.transport_retries; ++attempt) {
      try {
        result.backend_raw = backend_.generate(request).text;
        return true;
      } catch (const BackendError& e) {
        result.error = e.what();
      }
    }
    return false;
  });
  if (!backend_ok) {
    result.status = TurnStatus::BackendFailure;
    result.timings_ms["total"] =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(
            std::chrono::steady_clock::now() - total_start)
            .count();
    return result;
  }

  SlotFrame parsed;
  bool parse_ok = timer.time("parse", [&] {
    try {
      parsed = parse_model_response(result.backend_raw);
      return true;
    } catch (const UnparseableResponseError& e) {
      result.error = e.what();
      return false;
    }
  });
  if (!parse_ok) {
    result.status = TurnStatus::ParseFailure;
    result.timings_ms["total"] =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(
            std::chrono::steady_clock::now() - total_start)
            .count();
    return result;
  }

  // Model output labels may differ in casing/punctuation from the registry;
  // fold them onto canonical form before filtering.
  SlotFrame canonical;
  for (const auto& [label, values] : parsed.entries) {
    std::string key;
    try {
      key = canonicalize_label(label);
    } catch (const ValidationError&) {
      result.warnings.push_back("dropped unlabeled values from response");
      continue;
    }
    for (const std::string& v : values) canonical.add(key, v);
  }

  timer.time("filter", [&] {
    if (config_.apply_constraints) {
      auto filtered = constraints::filter_frame(canonical, registry_);
      result.frame = std::move(filtered.frame);
      result.verdicts = std::move(filtered.verdicts);
    } else {
      result.frame = std::move(canonical);
    }
  });

  result.timings_ms["total"] =
      std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(
          std::chrono::steady_clock::now() - total_start)
          .count();
  return result;
}

eval::EvalReport run_ablation(const std::vector<AnnotatedTranscript>& corpus, AblationMode mode,
                              const SlotRegistry& registry, GenerationBackend& backend,
                              PipelineConfig base) {
  PipelineConfig config = base;
  switch (mode) {
    case AblationMode::Full:
      config.narrow_with_prefilter = true;
      config.apply_constraints = true;
      break;
    case AblationMode::PrefilterOnly:
      config.narrow_with_prefilter = true;
      config.apply_constraints = false;
      break;
    case AblationMode::ConstraintsOnly:
      config.narrow_with_prefilter = false;
      config.apply_constraints = true;
      break;
  }
  Pipeline pipeline(registry, backend, config);

  std::vector<eval::EvalUnit> units;
  const std::vector<std::string> all_labels = registry.labels();
  for (const AnnotatedTranscript& doc : corpus) {
    Session session;
    session.transcript_id = doc.transcript.id;
    session.window = config.window;
    session.requested_labels = all_labels;
    for (const Turn& turn : doc.transcript.turns) {
      PipelineResult r = pipeline.process_turn(session, turn);
      eval::EvalUnit unit;
      unit.unit_id = doc.transcript.id + "#" + std::to_string(turn.index);
      unit.pred = r.frame;
      auto it = doc.frames.find(turn.index);
      if (it != doc.frames.end()) unit.ref = it->second;
      units.push_back(std::move(unit));
    }
  }
  eval::EvalOptions options;
  options.explanations = false;
  return eval::evaluate(units, options);
}

}  // namespace slotfill::pipeline
