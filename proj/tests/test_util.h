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

#ifndef SLOTFILL_TESTS_TEST_UTIL_H_
#define SLOTFILL_TESTS_TEST_UTIL_H_

#include <string>

#include <doctest.h>

#include "slotfill/model.h"
#include "slotfill/registry.h"

namespace testutil {

inline std::string fixture(const std::string& name) {
  return std::string(SLOTFILL_FIXTURE_DIR) + "/" + name;
}

inline slotfill::SlotRegistry fixture_registry() {
  return slotfill::SlotRegistry::load(fixture("registry_seed.json"));
}

inline std::vector<slotfill::AnnotatedTranscript> fixture_gold() {
  auto loaded = slotfill::load_annotated(fixture("annotated.jsonl"));
  REQUIRE(loaded.diagnostics.empty());
  return loaded.items;
}

inline std::vector<slotfill::Transcript> fixture_transcripts() {
  auto loaded = slotfill::load_transcripts(fixture("transcripts.jsonl"));
  REQUIRE(loaded.diagnostics.empty());
  return loaded.items;
}

}  // namespace testutil

#endif  // SLOTFILL_TESTS_TEST_UTIL_H_
