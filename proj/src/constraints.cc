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

#include "slotfill/constraints.h"

#include <atomic>
#include <functional>
#include <regex>
#include <unordered_map>

#include "slotfill/errors.h"
#include "slotfill/registry.h"
#include "slotfill/text_norm.h"

namespace slotfill::constraints {

using nlohmann::json;

namespace {

bool ner_kind(const std::string& kind) {
  return kind == "person" || kind == "location" || kind == "organization";
}

size_t count_digits(const std::string& s) {
  size_t n = 0;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c))) ++n;
  }
  return n;
}

// Named patterns applied to the canonical form. Referencing an unknown id
// is a configuration error at load time, never at check time.
const std::unordered_map<std::string, std::function<bool(const std::string&)>>& patterns() {
  static const auto* table =
      new std::unordered_map<std::string, std::function<bool(const std::string&)>>{
          {"digits", [](const std::string& s) { return is_digits(s); }},
          {"alphanumeric",
           [](const std::string& s) {
             if (s.empty()) return false;
             for (char c : s) {
               if (!std::isalnum(static_cast<unsigned char>(c)) && c != ' ') return false;
             }
             return true;
           }},
          {"phone",
           [](const std::string& s) {
             static const std::regex re(R"(^\+?[0-9][0-9 ().-]*$)");
             return std::regex_match(s, re) && count_digits(s) >= 7;
           }},
          {"zipcode",
           [](const std::string& s) {
             static const std::regex re(R"(^[0-9]{5}(-[0-9]{4})?$)");
             return std::regex_match(s, re);
           }},
      };
  return *table;
}

std::string fresh_rule_id(const std::string& stem) {
  static std::atomic<uint64_t> counter{0};
  return stem + "#" + std::to_string(counter.fetch_add(1));
}

std::string kinds_text(const itn::NormalizedValue& v) {
  std::string s;
  for (auto k : v.kinds) {
    if (!s.empty()) s += ",";
    s += itn::kind_name(k);
  }
  return s;
}

ConstraintVerdict pass(const itn::NormalizedValue& v, const ConstraintRule& r,
                       std::string reason = "") {
  return {v.surface, r.id, true, std::move(reason)};
}

ConstraintVerdict fail(const itn::NormalizedValue& v, const ConstraintRule& r,
                       std::string reason) {
  return {v.surface, r.id, false, std::move(reason)};
}

bool gazetteer_has(const SlotLabelRecord& record, const std::string& canonical) {
  for (const std::string& entry : record.gazetteer) {
    const std::string norm = itn::apply_itn(entry).canonical;
    if (norm.empty()) continue;
    if (norm == canonical || canonical.find(norm) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

ConstraintRule rule_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) {
    throw ConfigError("constraint rule must be an object with a \"type\"");
  }
  const std::string type = j["type"].get<std::string>();
  ConstraintRule r;
  r.id = j.value("id", "");
  if (type == "entity_kind") {
    r.predicate = Predicate::EntityKindIs;
    r.predefined = true;
    r.kind = to_lower_ascii(j.value("kind", ""));
    if (!itn::kind_from_name(r.kind) && !ner_kind(r.kind)) {
      throw ConfigError("unknown entity kind \"" + r.kind + "\"");
    }
    if (r.id.empty()) r.id = fresh_rule_id("kind-" + r.kind);
  } else if (type == "length") {
    r.predicate = Predicate::LengthBetween;
    r.min = j.value("min", 0u);
    r.max = j.value("max", 0u);
    if (r.max < r.min) throw ConfigError("length constraint has max < min");
    if (r.id.empty()) r.id = fresh_rule_id("length");
  } else if (type == "token_count") {
    r.predicate = Predicate::TokenCountBetween;
    r.min = j.value("min", 0u);
    r.max = j.value("max", 0u);
    if (r.max < r.min) throw ConfigError("token_count constraint has max < min");
    if (r.id.empty()) r.id = fresh_rule_id("tokens");
  } else if (type == "partial_cardinal") {
    r.predicate = Predicate::PartialCardinal;
    r.predefined = true;
    if (r.id.empty()) r.id = fresh_rule_id("partial-cardinal");
  } else if (type == "pattern") {
    r.predicate = Predicate::Pattern;
    r.pattern_id = j.value("pattern", "");
    if (!known_pattern(r.pattern_id)) {
      throw ConfigError("unknown pattern id \"" + r.pattern_id + "\"");
    }
    if (r.id.empty()) r.id = fresh_rule_id("pattern-" + r.pattern_id);
  } else if (type == "all_of" || type == "any_of") {
    r.predicate = type == "all_of" ? Predicate::AllOf : Predicate::AnyOf;
    if (!j.contains("rules") || !j["rules"].is_array() || j["rules"].empty()) {
      throw ConfigError(type + " requires a non-empty \"rules\" array");
    }
    for (const json& jc : j["rules"]) r.children.push_back(rule_from_json(jc));
    if (r.id.empty()) r.id = fresh_rule_id(type);
  } else {
    throw ConfigError("unknown constraint type \"" + type + "\"");
  }
  return r;
}

json rule_to_json(const ConstraintRule& r) {
  json j;
  j["id"] = r.id;
  switch (r.predicate) {
    case Predicate::EntityKindIs:
      j["type"] = "entity_kind";
      j["kind"] = r.kind;
      break;
    case Predicate::LengthBetween:
      j["type"] = "length";
      j["min"] = r.min;
      j["max"] = r.max;
      break;
    case Predicate::TokenCountBetween:
      j["type"] = "token_count";
      j["min"] = r.min;
      j["max"] = r.max;
      break;
    case Predicate::PartialCardinal:
      j["type"] = "partial_cardinal";
      break;
    case Predicate::Pattern:
      j["type"] = "pattern";
      j["pattern"] = r.pattern_id;
      break;
    case Predicate::AllOf:
    case Predicate::AnyOf: {
      j["type"] = r.predicate == Predicate::AllOf ? "all_of" : "any_of";
      json arr = json::array();
      for (const auto& c : r.children) arr.push_back(rule_to_json(c));
      j["rules"] = arr;
      break;
    }
  }
  return j;
}

bool known_pattern(const std::string& pattern_id) {
  return patterns().count(pattern_id) != 0;
}

ConstraintVerdict check(const itn::NormalizedValue& value, const ConstraintRule& rule,
                        const SlotLabelRecord* record) {
  switch (rule.predicate) {
    case Predicate::EntityKindIs: {
      if (auto kind = itn::kind_from_name(rule.kind)) {
        if (value.has(*kind)) return pass(value, rule);
        return fail(value, rule,
                    "expected kind \"" + rule.kind + "\", detected [" + kinds_text(value) + "]");
      }
      // person/location/organization degrade to gazetteer hits.
      if (record == nullptr || record->gazetteer.empty()) {
        return pass(value, rule, "no recognizer configured for kind \"" + rule.kind + "\"");
      }
      if (gazetteer_has(*record, value.canonical)) return pass(value, rule);
      return fail(value, rule,
                  "\"" + value.canonical + "\" not found in the " + rule.kind + " gazetteer");
    }
    case Predicate::LengthBetween: {
      size_t n = value.canonical.size();
      if (n >= rule.min && n <= rule.max) return pass(value, rule);
      return fail(value, rule,
                  "length " + std::to_string(n) + " outside [" + std::to_string(rule.min) +
                      "," + std::to_string(rule.max) + "]");
    }
    case Predicate::TokenCountBetween: {
      size_t n = split_whitespace(value.canonical).size();
      if (n >= rule.min && n <= rule.max) return pass(value, rule);
      return fail(value, rule,
                  "token count " + std::to_string(n) + " outside [" +
                      std::to_string(rule.min) + "," + std::to_string(rule.max) + "]");
    }
    case Predicate::PartialCardinal: {
      for (const std::string& tok : split_whitespace(value.canonical)) {
        if (is_digits(tok)) return pass(value, rule);
      }
      return fail(value, rule, "no pure digit token in \"" + value.canonical + "\"");
    }
    case Predicate::Pattern: {
      auto it = patterns().find(rule.pattern_id);
      if (it == patterns().end()) {
        // Unreachable for rules built via rule_from_json.
        return fail(value, rule, "unknown pattern id \"" + rule.pattern_id + "\"");
      }
      if (it->second(value.canonical)) return pass(value, rule);
      return fail(value, rule,
                  "\"" + value.canonical + "\" does not match pattern \"" + rule.pattern_id + "\"");
    }
    case Predicate::AllOf: {
      for (const auto& child : rule.children) {
        ConstraintVerdict v = check(value, child, record);
        if (!v.passed) return fail(value, rule, "all_of failed: " + v.reason);
      }
      return pass(value, rule);
    }
    case Predicate::AnyOf: {
      std::string reasons;
      for (const auto& child : rule.children) {
        ConstraintVerdict v = check(value, child, record);
        if (v.passed) return pass(value, rule);
        if (!reasons.empty()) reasons += "; ";
        reasons += v.reason;
      }
      return fail(value, rule, "any_of failed: " + reasons);
    }
  }
  return fail(value, rule, "unhandled predicate");
}

FilterResult filter_frame(const SlotFrame& frame, const SlotRegistry& registry) {
  FilterResult result;
  for (const auto& [label, values] : frame.entries) {
    std::optional<SlotLabelRecord> record = registry.lookup(label);
    std::vector<std::string> kept;
    for (const std::string& value : values) {
      if (!record || record->rules.empty()) {
        // Open-world default: unknown or unconstrained labels keep values.
        result.verdicts.push_back({value, "no-constraints", true, "no constraints attached"});
        kept.push_back(value);
        continue;
      }
      const itn::NormalizedValue nv = itn::apply_itn(value);
      bool all_passed = true;
      for (const auto& rule : record->rules) {
        ConstraintVerdict v = check(nv, rule, &*record);
        all_passed = all_passed && v.passed;
        result.verdicts.push_back(std::move(v));
      }
      if (all_passed) kept.push_back(value);
    }
    if (!kept.empty()) result.frame.entries[label] = std::move(kept);
  }
  return result;
}

}  // namespace slotfill::constraints
