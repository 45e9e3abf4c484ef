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

#ifndef SLOTFILL_LABEL_H_
#define SLOTFILL_LABEL_H_

#include <string>
#include <string_view>

namespace slotfill {

// Canonical slot label form: case-folded, punctuation treated as spaces
// (underscores included), whitespace collapsed, then Title Case.
// "reason_for_call " -> "Reason For Call". Deterministic; throws
// ValidationError on input that is empty after trimming.
std::string canonicalize_label(std::string_view raw);

}  // namespace slotfill

#endif  // SLOTFILL_LABEL_H_
