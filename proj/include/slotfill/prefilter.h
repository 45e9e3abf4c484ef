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
// Extractive preprocessing stage: proposes candidate slot values from raw
// text and narrows the label set requested from the generative backend.
// A rule-based reference extractor is built in; a zero-shot NER server can
// be dropped in behind ExtractorBackend.

#ifndef SLOTFILL_PREFILTER_H_
#define SLOTFILL_PREFILTER_H_

#include <set>
#include <string>
#include <vector>

#include "slotfill/registry.h"

namespace slotfill::prefilter {

struct Candidate {
  std::string label;  // canonical
  std::string value;  // exact substring of the input text
  size_t start = 0;   // [start, end) character offsets
  size_t end = 0;
  double score = 1.0;
};

// Wire contract mirroring common zero-shot NER serving shapes:
// request {"text", "labels"} -> response {"entities": [{"label", "text",
// "start", "end", "score"}, ...]}.
class ExtractorBackend {
 public:
  struct Entity {
    std::string label;
    std::string text;
    size_t start = 0;
    size_t end = 0;
    double score = 1.0;
  };

  virtual ~ExtractorBackend() = default;
  virtual std::vector<Entity> extract(const std::string& text,
                                      const std::vector<std::string>& labels) = 0;
  virtual std::string name() const = 0;
};

// Reference extractor: entity-kind recognizers (email, money, date, time,
// cardinal, duration, phone-like digit runs) mapped to labels through each
// label's constraint declarations, plus per-label gazetteers. Total: never
// fails.
std::vector<Candidate> extract_candidates(const std::string& text, const SlotRegistry& registry);

// Backend-backed variant; spans are validated against the input text and
// labels canonicalized. Throws BackendError with transport diagnostics.
std::vector<Candidate> extract_candidates(const std::string& text, const SlotRegistry& registry,
                                          ExtractorBackend& backend);

// Every abstractive label with at least one trigger phrase present
// (case-insensitive substring after whitespace collapsing).
std::set<std::string> detect_abstractive(const std::string& context_plus_text,
                                         const SlotRegistry& registry);

// requested ∩ (labels(candidates) ∪ abstractive_hits), preserving the order
// of `requested`. Never returns a label outside `requested`.
std::vector<std::string> narrow_labels(const std::vector<std::string>& requested,
                                       const std::vector<Candidate>& candidates,
                                       const std::set<std::string>& abstractive_hits);

}  // namespace slotfill::prefilter

#endif  // SLOTFILL_PREFILTER_H_
