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

#include "slotfill/backend.h"

#include <fstream>

#include <httplib.h>
#include <json.hpp>

#include "slotfill/errors.h"
#include "slotfill/label.h"
#include "slotfill/prompts.h"
#include "slotfill/rng.h"
#include "slotfill/text_norm.h"

namespace slotfill {

using nlohmann::json;

namespace {

// "http://host:port/path" -> (origin, path)
std::pair<std::string, std::string> split_url(const std::string& url) {
  size_t scheme = url.find("://");
  size_t path_at = scheme == std::string::npos ? url.find('/') : url.find('/', scheme + 3);
  if (path_at == std::string::npos) return {url, "/"};
  return {url.substr(0, path_at), url.substr(path_at)};
}

std::string norm_text(const std::string& s) {
  return to_lower_ascii(collapse_whitespace(s));
}

}  // namespace

// ---------------------------------------------------------------------------
// HTTP
// ---------------------------------------------------------------------------

HttpGenerationBackend::HttpGenerationBackend(std::string url, double timeout_s)
    : url_(std::move(url)), timeout_s_(timeout_s) {}

GenerationResponse HttpGenerationBackend::generate(const GenerationRequest& request) {
  auto [origin, path] = split_url(url_);
  httplib::Client client(origin);
  client.set_connection_timeout(std::chrono::milliseconds(
      static_cast<int>(timeout_s_ * 1000)));
  client.set_read_timeout(std::chrono::milliseconds(static_cast<int>(timeout_s_ * 1000)));
  json body = {{"prompt", request.prompt},
               {"max_tokens", request.max_tokens},
               {"temperature", request.temperature}};
  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) {
    throw BackendError("generation backend " + url_ + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw BackendError("generation backend " + url_ + ": HTTP " + std::to_string(res->status));
  }
  json j = json::parse(res->body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("text") || !j["text"].is_string()) {
    throw BackendError("generation backend " + url_ + ": response missing \"text\"");
  }
  return {j["text"].get<std::string>()};
}

HttpExtractorBackend::HttpExtractorBackend(std::string url, double timeout_s)
    : url_(std::move(url)), timeout_s_(timeout_s) {}

std::vector<prefilter::ExtractorBackend::Entity> HttpExtractorBackend::extract(
    const std::string& text, const std::vector<std::string>& labels) {
  auto [origin, path] = split_url(url_);
  httplib::Client client(origin);
  client.set_connection_timeout(std::chrono::milliseconds(
      static_cast<int>(timeout_s_ * 1000)));
  client.set_read_timeout(std::chrono::milliseconds(static_cast<int>(timeout_s_ * 1000)));
  json body = {{"text", text}, {"labels", labels}};
  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) {
    throw BackendError("extractor backend " + url_ + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw BackendError("extractor backend " + url_ + ": HTTP " + std::to_string(res->status));
  }
  json j = json::parse(res->body, nullptr, false);
  if (j.is_discarded() || !j.contains("entities") || !j["entities"].is_array()) {
    throw BackendError("extractor backend " + url_ + ": response missing \"entities\"");
  }
  std::vector<Entity> out;
  for (const json& je : j["entities"]) {
    Entity e;
    e.label = je.value("label", "");
    e.text = je.value("text", "");
    e.start = je.value("start", 0u);
    e.end = je.value("end", 0u);
    e.score = je.value("score", 1.0);
    if (!e.label.empty() && !e.text.empty()) out.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Replay
// ---------------------------------------------------------------------------

std::string ReplayBackend::prompt_hash(const std::string& prompt) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(prompt)));
  return buf;
}

ReplayBackend ReplayBackend::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open replay fixture " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("replay fixture " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("replay fixture must be a JSON object");
  ReplayBackend backend;
  for (const auto& [hash, text] : j.items()) {
    backend.responses_[hash] = text.get<std::string>();
  }
  return backend;
}

void ReplayBackend::save(const std::string& path) const {
  json j = json::object();
  for (const auto& [hash, text] : responses_) j[hash] = text;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write replay fixture " + path);
  out << j.dump(2) << "\n";
}

void ReplayBackend::add(const std::string& prompt, const std::string& response_text) {
  responses_[prompt_hash(prompt)] = response_text;
}

GenerationResponse ReplayBackend::generate(const GenerationRequest& request) {
  auto it = responses_.find(prompt_hash(request.prompt));
  if (it == responses_.end()) {
    throw BackendError("replay backend has no fixture for prompt hash " +
                       prompt_hash(request.prompt));
  }
  return {it->second};
}

// ---------------------------------------------------------------------------
// Oracle
// ---------------------------------------------------------------------------

OracleBackend::OracleBackend(std::vector<AnnotatedTranscript> gold) : gold_(std::move(gold)) {}

std::optional<OracleBackend::WindowRef> OracleBackend::resolve(const std::string& prompt) const {
  std::vector<std::string> lines = prompts::main_text_lines(prompt);
  if (lines.empty()) return std::nullopt;
  std::vector<std::string> wanted;
  for (const std::string& line : lines) {
    wanted.push_back(norm_text(prompts::strip_role_prefix(line)));
  }

  const AnnotatedTranscript* best_doc = nullptr;
  std::vector<int> best_turns;
  for (const AnnotatedTranscript& doc : gold_) {
    std::vector<int> matched;
    for (const std::string& text : wanted) {
      for (const Turn& turn : doc.transcript.turns) {
        if (norm_text(turn.text) == text) {
          matched.push_back(turn.index);
          break;
        }
      }
    }
    if (matched.size() > best_turns.size()) {
      best_turns = matched;
      best_doc = &doc;
    }
  }
  if (best_doc == nullptr || best_turns.empty()) return std::nullopt;

  WindowRef ref;
  ref.transcript_id = best_doc->transcript.id;
  SlotFrame merged;
  for (int idx : best_turns) {
    ref.last_turn = std::max(ref.last_turn, idx);
    auto it = best_doc->frames.find(idx);
    if (it != best_doc->frames.end()) merged = merge_frames(merged, it->second);
  }
  ref.gold = std::move(merged);
  return ref;
}

GenerationResponse OracleBackend::generate(const GenerationRequest& request) {
  auto ref = resolve(request.prompt);
  if (!ref) return {"{}"};
  auto requested = prompts::labels_in_prompt(request.prompt);
  json obj = json::object();
  for (const auto& [label, values] : ref->gold.entries) {
    if (requested) {
      bool wanted = false;
      for (const std::string& r : *requested) {
        if (canonicalize_label(r) == label) wanted = true;
      }
      if (!wanted) continue;
    }
    obj[label] = values;
  }
  return {obj.dump()};
}

// ---------------------------------------------------------------------------
// Noisy mock
// ---------------------------------------------------------------------------

NoisyMockBackend::NoisyMockBackend(std::vector<AnnotatedTranscript> gold, Options options)
    : oracle_(std::move(gold)), options_(std::move(options)) {}

GenerationResponse NoisyMockBackend::generate(const GenerationRequest& request) {
  auto ref = oracle_.resolve(request.prompt);
  json obj = json::object();
  std::string key_id = "?";
  int key_turn = -1;
  if (ref) {
    key_id = ref->transcript_id;
    key_turn = ref->last_turn;
  }
  auto requested = prompts::labels_in_prompt(request.prompt);
  std::vector<std::string> labels;
  if (requested) {
    for (const std::string& r : *requested) labels.push_back(canonicalize_label(r));
  }

  if (ref) {
    for (const auto& [label, values] : ref->gold.entries) {
      bool wanted = !requested;
      for (const std::string& l : labels) {
        if (l == label) wanted = true;
      }
      if (wanted) obj[label] = values;
    }
  }

  for (const std::string& label : labels) {
    uint64_t key = fnv1a(label, fnv1a_u64(static_cast<uint64_t>(key_turn),
                                          fnv1a(key_id, options_.seed ^ 0x5f0c6a3d9e21b847ULL)));
    SplitMix64 rng(key);
    if (rng.next_unit() < options_.violating_rate) {
      json& list = obj[label];
      if (!list.is_array()) list = json::array();
      list.push_back(options_.violating_value);
    }
    auto pj = options_.passing_junk.find(label);
    if (pj != options_.passing_junk.end() && rng.next_unit() < options_.passing_rate) {
      json& list = obj[label];
      if (!list.is_array()) list = json::array();
      list.push_back(pj->second);
    }
  }
  return {obj.dump()};
}

}  // namespace slotfill
