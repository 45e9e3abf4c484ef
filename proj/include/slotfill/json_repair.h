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
// Repair ladder for model output that should have been a JSON object:
//   1. strict parse (a top-level array of objects is merged key-wise);
//   2. longest brace-balanced substring;
//   3. quote/trailing-comma/python-literal relaxation, code fences stripped;
//   4. line-wise "label: value" salvage.

#ifndef SLOTFILL_JSON_REPAIR_H_
#define SLOTFILL_JSON_REPAIR_H_

#include <optional>
#include <string>

#include <json.hpp>

namespace slotfill::repair {

// Runs the full ladder; nullopt when every rung fails.
std::optional<nlohmann::json> parse_object_with_repair(const std::string& raw);

// Individual rungs, exposed for targeted testing.
std::optional<nlohmann::json> strict_object(const std::string& text);
std::string longest_balanced_object(const std::string& text);  // "" when none
std::string relax_json(const std::string& text);
std::optional<nlohmann::json> salvage_lines(const std::string& text);

}  // namespace slotfill::repair

#endif  // SLOTFILL_JSON_REPAIR_H_
