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
// Generation backend contract shared by the teacher-annotation loop and the
// serving pipeline: request {"prompt", "max_tokens", "temperature"} ->
// response {"text"}. The replay, oracle and noisy-mock implementations make
// the full loop testable offline.

#ifndef SLOTFILL_BACKEND_H_
#define SLOTFILL_BACKEND_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slotfill/model.h"
#include "slotfill/prefilter.h"

namespace slotfill {

struct GenerationRequest {
  std::string prompt;
  int max_tokens = 512;
  double temperature = 0.0;
};

struct GenerationResponse {
  std::string text;
};

class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;
  // Throws BackendError on transport or protocol failure.
  virtual GenerationResponse generate(const GenerationRequest& request) = 0;
  virtual std::string name() const = 0;
};

// POSTs the request JSON to a configured URL.
class HttpGenerationBackend final : public GenerationBackend {
 public:
  explicit HttpGenerationBackend(std::string url, double timeout_s = 10.0);
  GenerationResponse generate(const GenerationRequest& request) override;
  std::string name() const override { return "http"; }

 private:
  std::string url_;
  double timeout_s_;
};

// Serves canned responses from {prompt-hash -> text} fixtures.
class ReplayBackend final : public GenerationBackend {
 public:
  ReplayBackend() = default;
  static ReplayBackend load(const std::string& path);
  void save(const std::string& path) const;

  void add(const std::string& prompt, const std::string& response_text);
  static std::string prompt_hash(const std::string& prompt);

  GenerationResponse generate(const GenerationRequest& request) override;
  std::string name() const override { return "replay"; }

 private:
  std::map<std::string, std::string> responses_;
};

// Replays gold annotations: resolves the prompt's Main text lines back to
// transcript turns and answers with the union of their gold frames,
// restricted to the labels the prompt asked for.
class OracleBackend : public GenerationBackend {
 public:
  explicit OracleBackend(std::vector<AnnotatedTranscript> gold);

  struct WindowRef {
    std::string transcript_id;
    int last_turn = -1;
    SlotFrame gold;  // union over the window's turns, labels canonical
  };
  std::optional<WindowRef> resolve(const std::string& prompt) const;

  GenerationResponse generate(const GenerationRequest& request) override;
  std::string name() const override { return "oracle"; }

 protected:
  std::vector<AnnotatedTranscript> gold_;
};

// Oracle plus injected junk. Injection decisions are keyed on the resolved
// (transcript, turn, label) triple, not the prompt bytes, so every ablation
// mode sees the same spurious values and their differences come only from
// narrowing and constraint filtering.
class NoisyMockBackend final : public GenerationBackend {
 public:
  struct Options {
    uint64_t seed = 7;
    double violating_rate = 0.3;           // junk that fails typical constraints
    std::string violating_value = "umm";
    double passing_rate = 0.3;             // junk that passes, per listed label
    std::map<std::string, std::string> passing_junk;  // label -> value
  };

  NoisyMockBackend(std::vector<AnnotatedTranscript> gold, Options options);
  GenerationResponse generate(const GenerationRequest& request) override;
  std::string name() const override { return "noisy-mock"; }

 private:
  OracleBackend oracle_;
  Options options_;
};

// Client for an external zero-shot NER server speaking the extractor wire
// contract (a real zero-shot NER deployment drops in here).
class HttpExtractorBackend final : public prefilter::ExtractorBackend {
 public:
  explicit HttpExtractorBackend(std::string url, double timeout_s = 10.0);
  std::vector<Entity> extract(const std::string& text,
                              const std::vector<std::string>& labels) override;
  std::string name() const override { return "http"; }

 private:
  std::string url_;
  double timeout_s_;
};

}  // namespace slotfill

#endif  // SLOTFILL_BACKEND_H_
