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

#include "slotfill/registry.h"

#include <fstream>
#include <mutex>

#include <json.hpp>

#include "slotfill/errors.h"
#include "slotfill/label.h"
#include "slotfill/text_norm.h"

namespace slotfill {

using nlohmann::json;

const char* slot_kind_name(SlotKind k) {
  return k == SlotKind::Extractive ? "extractive" : "abstractive";
}

std::optional<SlotKind> slot_kind_from_name(std::string_view name) {
  if (name == "extractive") return SlotKind::Extractive;
  if (name == "abstractive") return SlotKind::Abstractive;
  return std::nullopt;
}

SlotRegistry::SlotRegistry(const SlotRegistry& other) {
  std::shared_lock lock(other.mu_);
  records_ = other.records_;
}

SlotLabelRecord SlotRegistry::register_label(const std::string& raw, SlotKind kind) {
  const std::string canonical = canonicalize_label(raw);
  std::unique_lock lock(mu_);
  auto it = records_.find(canonical);
  if (it != records_.end()) {
    if (it->second.kind != kind) {
      throw RegistryConflictError("label \"" + canonical + "\" already registered as " +
                                  slot_kind_name(it->second.kind) + ", cannot re-register as " +
                                  slot_kind_name(kind));
    }
    it->second.aliases.insert(trim(raw));
    return it->second;
  }
  SlotLabelRecord rec;
  rec.canonical = canonical;
  rec.aliases.insert(trim(raw));
  rec.kind = kind;
  records_[canonical] = rec;
  return rec;
}

bool SlotRegistry::contains(const std::string& raw) const {
  std::shared_lock lock(mu_);
  return records_.count(canonicalize_label(raw)) != 0;
}

std::optional<SlotLabelRecord> SlotRegistry::lookup(const std::string& raw) const {
  std::string canonical;
  try {
    canonical = canonicalize_label(raw);
  } catch (const ValidationError&) {
    return std::nullopt;
  }
  std::shared_lock lock(mu_);
  auto it = records_.find(canonical);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> SlotRegistry::labels() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  out.reserve(records_.size());
  for (const auto& [canonical, rec] : records_) out.push_back(canonical);
  return out;
}

std::vector<SlotLabelRecord> SlotRegistry::snapshot() const {
  std::shared_lock lock(mu_);
  std::vector<SlotLabelRecord> out;
  out.reserve(records_.size());
  for (const auto& [canonical, rec] : records_) out.push_back(rec);
  return out;
}

size_t SlotRegistry::size() const {
  std::shared_lock lock(mu_);
  return records_.size();
}

SlotRegistry SlotRegistry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open registry config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("registry config " + path + ": " + e.what());
  }
  if (!j.is_array()) throw ConfigError("registry config must be a JSON array");
  SlotRegistry reg;
  for (const json& jr : j) {
    if (!jr.is_object() || !jr.contains("label")) {
      throw ConfigError("registry record missing \"label\"");
    }
    auto kind = slot_kind_from_name(jr.value("kind", "extractive"));
    if (!kind) throw ConfigError("unknown slot kind for \"" + jr["label"].get<std::string>() + "\"");
    SlotLabelRecord rec = reg.register_label(jr["label"].get<std::string>(), *kind);
    SlotLabelRecord full = rec;
    if (jr.contains("constraints")) {
      for (const json& jc : jr["constraints"]) {
        full.rules.push_back(constraints::rule_from_json(jc));
      }
    }
    if (jr.contains("triggers")) {
      for (const json& jt : jr["triggers"]) full.triggers.push_back(jt.get<std::string>());
    }
    if (jr.contains("gazetteer")) {
      for (const json& jg : jr["gazetteer"]) full.gazetteer.push_back(jg.get<std::string>());
    }
    if (*kind == SlotKind::Extractive && !full.triggers.empty()) {
      throw ConfigError("extractive label \"" + full.canonical + "\" cannot carry triggers");
    }
    std::unique_lock lock(reg.mu_);
    reg.records_[full.canonical] = full;
  }
  return reg;
}

void SlotRegistry::save(const std::string& path) const {
  json arr = json::array();
  for (const SlotLabelRecord& rec : snapshot()) {
    json jr = {{"label", rec.canonical}, {"kind", slot_kind_name(rec.kind)}};
    json jcs = json::array();
    for (const auto& rule : rec.rules) jcs.push_back(constraints::rule_to_json(rule));
    jr["constraints"] = jcs;
    jr["triggers"] = rec.triggers;
    jr["gazetteer"] = rec.gazetteer;
    arr.push_back(jr);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write registry config " + path);
  out << arr.dump(2) << "\n";
}

}  // namespace slotfill
