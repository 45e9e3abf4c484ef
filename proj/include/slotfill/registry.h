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
// The growing, canonicalized list of slot labels produced by slot induction
// and consumed by annotation, instruction generation and the prefilter.

#ifndef SLOTFILL_REGISTRY_H_
#define SLOTFILL_REGISTRY_H_

#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "slotfill/constraints.h"

namespace slotfill {

enum class SlotKind { Extractive, Abstractive };

const char* slot_kind_name(SlotKind k);
std::optional<SlotKind> slot_kind_from_name(std::string_view);

struct SlotLabelRecord {
  std::string canonical;
  std::set<std::string> aliases;  // observed surface forms
  SlotKind kind = SlotKind::Extractive;
  std::vector<constraints::ConstraintRule> rules;
  std::vector<std::string> triggers;   // abstractive labels only
  std::vector<std::string> gazetteer;  // known surface values for this label
};

// Concurrent reads, writes serialized through one mutation gate. Lookups
// return copies so readers never observe a half-registered record.
class SlotRegistry {
 public:
  SlotRegistry() = default;
  SlotRegistry(const SlotRegistry& other);
  SlotRegistry& operator=(const SlotRegistry&) = delete;

  // Adds raw under its canonical form, or extends the existing record's
  // alias set. Registering an existing canonical with a different kind
  // throws RegistryConflictError naming both kinds.
  SlotLabelRecord register_label(const std::string& raw, SlotKind kind = SlotKind::Extractive);

  bool contains(const std::string& raw) const;
  std::optional<SlotLabelRecord> lookup(const std::string& raw) const;

  std::vector<std::string> labels() const;  // sorted canonicals
  std::vector<SlotLabelRecord> snapshot() const;
  size_t size() const;

  // Seed/config file: a JSON array of
  //   {"label": ..., "kind": "extractive"|"abstractive",
  //    "constraints": [...], "triggers": [...], "gazetteer": [...]}
  // Saving writes the same format, so induced labels persist by appending.
  static SlotRegistry load(const std::string& path);
  void save(const std::string& path) const;

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, SlotLabelRecord> records_;
};

}  // namespace slotfill

#endif  // SLOTFILL_REGISTRY_H_
