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
// Postprocessing constraint engine: predefined per-entity-kind rules plus
// user-defined per-slot rules that filter false positives out of extracted
// frames. Values are checked in their ITN-canonical form.

#ifndef SLOTFILL_CONSTRAINTS_H_
#define SLOTFILL_CONSTRAINTS_H_

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "slotfill/itn.h"
#include "slotfill/model.h"

namespace slotfill {

class SlotRegistry;
struct SlotLabelRecord;

namespace constraints {

enum class Predicate {
  EntityKindIs,       // value's detected kind set contains the named kind
  LengthBetween,      // canonical length in characters
  TokenCountBetween,  // canonical whitespace tokens
  PartialCardinal,    // at least one canonical token is a pure digit run
  Pattern,            // named pattern from the built-in table
  AllOf,
  AnyOf,
};

struct ConstraintRule {
  std::string id;
  Predicate predicate = Predicate::AllOf;
  // True for entity-kind rules (predefined per kind), false for the
  // per-slot user-defined ones.
  bool predefined = false;
  std::string kind;        // EntityKindIs; ITN kind name or person/location/organization
  size_t min = 0, max = 0; // LengthBetween / TokenCountBetween
  std::string pattern_id;  // Pattern
  std::vector<ConstraintRule> children;  // AllOf / AnyOf
};

struct ConstraintVerdict {
  std::string value;    // surface form that was checked
  std::string rule_id;
  bool passed = false;
  std::string reason;   // non-empty whenever passed is false
};

// Config form, embedded in registry seed records:
//   {"type": "entity_kind", "kind": "cardinal"}
//   {"type": "length", "min": 1, "max": 64}
//   {"type": "token_count", "min": 2, "max": 12}
//   {"type": "partial_cardinal"}
//   {"type": "pattern", "pattern": "phone"}
//   {"type": "all_of"|"any_of", "rules": [...]}
// Unknown pattern ids or malformed ranges throw ConfigError at load time.
ConstraintRule rule_from_json(const nlohmann::json& j);
nlohmann::json rule_to_json(const ConstraintRule& rule);

bool known_pattern(const std::string& pattern_id);

// Checks one normalized value against one rule. `record` supplies the label
// context for gazetteer-backed NER kinds; it may be null.
ConstraintVerdict check(const itn::NormalizedValue& value, const ConstraintRule& rule,
                        const SlotLabelRecord* record = nullptr);

struct FilterResult {
  SlotFrame frame;  // surviving values, surface forms preserved
  std::vector<ConstraintVerdict> verdicts;  // every check, pass and fail
};

// Keeps each value iff it passes all constraints attached to its label.
// Labels with no surviving values are dropped. Labels absent from the
// registry are kept with a "no constraints" pass verdict.
FilterResult filter_frame(const SlotFrame& frame, const SlotRegistry& registry);

}  // namespace constraints
}  // namespace slotfill

#endif  // SLOTFILL_CONSTRAINTS_H_
