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

#include "slotfill/label.h"

#include <cctype>

#include "slotfill/errors.h"
#include "slotfill/text_norm.h"

namespace slotfill {

std::string canonicalize_label(std::string_view raw) {
  if (trim(raw).empty()) {
    throw ValidationError("slot label is empty");
  }
  std::string spaced;
  spaced.reserve(raw.size());
  for (char c : raw) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      spaced.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else {
      spaced.push_back(' ');
    }
  }
  return title_case(collapse_whitespace(spaced));
}

}  // namespace slotfill
