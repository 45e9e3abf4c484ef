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

#ifndef SLOTFILL_TEXT_NORM_H_
#define SLOTFILL_TEXT_NORM_H_

#include <string>
#include <string_view>
#include <vector>

namespace slotfill {

// ASCII-only case fold; bytes >= 0x80 pass through untouched.
std::string to_lower_ascii(std::string_view s);

// Trims and squeezes runs of whitespace to single spaces.
std::string collapse_whitespace(std::string_view s);

std::string trim(std::string_view s);

bool is_digits(std::string_view s);

std::vector<std::string> split_whitespace(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// First letter of each whitespace-separated token upper-cased, rest lowered.
std::string title_case(std::string_view s);

// Case-insensitive substring test after whitespace collapsing on both sides.
bool contains_folded(std::string_view haystack, std::string_view needle);

struct TokenSpan {
  std::string text;
  size_t start = 0;  // byte offsets into the source string
  size_t end = 0;
};

// Whitespace tokenization that remembers where each token came from, so
// rewrites can splice replacements back without disturbing the rest.
std::vector<TokenSpan> tokenize_with_offsets(std::string_view s);

}  // namespace slotfill

#endif  // SLOTFILL_TEXT_NORM_H_
