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
// Strict and lenient precision/recall/F1 over (label, value) pairs. Lenient
// matching runs after inverse text normalization; pairs are matched with
// maximum bipartite matching so one predicted value can never take credit
// for two references.

#ifndef SLOTFILL_EVALUATION_H_
#define SLOTFILL_EVALUATION_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slotfill/model.h"

namespace slotfill::eval {

enum class MatchRule {
  ExactNormalized,
  TokenSubset,
  TimeEquivalence,
  NumberEquivalence,
  Semantic,
  NoMatch,
};

const char* match_rule_name(MatchRule r);

struct MatchExplanation {
  std::pair<std::string, std::string> pred;  // (label, value)
  std::optional<std::pair<std::string, std::string>> ref;
  bool matched = false;
  MatchRule rule = MatchRule::NoMatch;
};

// Plugin point for semantic equivalence. Off by default; the reported
// metrics never rely on it unless explicitly enabled.
class SemanticMatcher {
 public:
  virtual ~SemanticMatcher() = default;
  virtual bool equivalent(const std::string& canonical_a,
                          const std::string& canonical_b) const = 0;
};

// Tiny built-in lexicon mapping number-like phrases ("couple" -> "2") before
// re-running the exact/subset rules.
class LexiconSemanticMatcher : public SemanticMatcher {
 public:
  LexiconSemanticMatcher();
  explicit LexiconSemanticMatcher(std::map<std::string, std::string> extra);
  bool equivalent(const std::string& canonical_a,
                  const std::string& canonical_b) const override;

 private:
  std::map<std::string, std::string> lexicon_;
};

// Rule chain: ITN both sides; equal canonicals (reported as Time/Number
// equivalence when those recognizers fired on both); token-subset with a
// stopword guard; then the semantic plugin if enabled.
MatchRule values_match_lenient(const std::string& pred, const std::string& ref,
                               const SemanticMatcher* semantic = nullptr);

struct Metrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

struct EvalCounts {
  size_t pred_pairs = 0;
  size_t ref_pairs = 0;
  size_t lenient_matches = 0;
  size_t strict_matches = 0;
};

struct EvalReport {
  Metrics strict;
  Metrics lenient;
  std::vector<MatchExplanation> per_pair;
  EvalCounts counts;
};

struct EvalUnit {
  std::string unit_id;
  SlotFrame pred;
  SlotFrame ref;
};

struct EvalOptions {
  const SemanticMatcher* semantic = nullptr;
  bool explanations = true;
};

EvalReport evaluate(const std::vector<EvalUnit>& units, const EvalOptions& options = {});

// Pairs two per-unit frame maps; throws AlignmentError when the id sets
// differ (emit an empty frame for units with no prediction).
std::vector<EvalUnit> align_units(const std::map<std::string, SlotFrame>& pred,
                                  const std::map<std::string, SlotFrame>& ref);

// Per-unit frame files: one {"unit_id": ..., "frame": {...}} record per
// line. Annotated transcript files are also accepted and exploded into
// "<id>#<turn>" units.
std::map<std::string, SlotFrame> load_unit_frames(const std::string& path);

std::string report_to_text(const EvalReport& report);
std::string report_to_json(const EvalReport& report, bool include_pairs = true);

}  // namespace slotfill::eval

#endif  // SLOTFILL_EVALUATION_H_
