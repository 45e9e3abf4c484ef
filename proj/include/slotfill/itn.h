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
// Inverse text normalization: rewrites spoken-form values into written form
// so that "7 PM", "7:00 PM" and "19:00" collapse to one canonical string.
// Applied to both references and model responses before scoring, and to
// pipeline outputs before constraint checking.

#ifndef SLOTFILL_ITN_H_
#define SLOTFILL_ITN_H_

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace slotfill::itn {

enum class Kind { Time, Date, Number, Money, Duration, Email, Plain };

const char* kind_name(Kind k);
std::optional<Kind> kind_from_name(std::string_view name);  // accepts "cardinal" for Number

struct NormalizedValue {
  std::string surface;
  std::string canonical;
  std::set<Kind> kinds;

  bool has(Kind k) const { return kinds.count(k) != 0; }
};

// Rewrites spelled-out cardinals ("one hundred twenty three") and standalone
// digit ordinals ("3rd") to digits. Runs of spelled single digits merge into
// one number ("one two three" -> "123"), matching how account numbers are
// read out. Everything unrecognized is preserved byte for byte.
std::string normalize_number(const std::string& text);

// Rewrites clock times to 24-hour "HH:MM". Only patterns anchored by a
// meridiem marker, a colon, or an o'clock word are promoted; bare numbers
// are never treated as times. Hours and minutes may be spelled out.
std::string normalize_time(const std::string& text);

// Full normalization: case folding, punctuation stripping (apostrophes
// removed, "&" -> "and"), whitespace collapsing, then number, time, date
// ("YYYY-MM-DD", or "MM-DD" when no year is present), money ("$20") and
// duration rewriting. kinds records which recognizers fired; Plain is the
// fallback and also marks leftover word content.
NormalizedValue apply_itn(const std::string& text);

// Recognizer spans over arbitrary raw text, for candidate extraction.
// Each span satisfies text[begin, end) == the matched surface.
struct Span {
  size_t begin = 0;
  size_t end = 0;
};
std::vector<Span> find_time_spans(const std::string& text);
std::vector<Span> find_date_spans(const std::string& text);
std::vector<Span> find_money_spans(const std::string& text);
std::vector<Span> find_duration_spans(const std::string& text);

}  // namespace slotfill::itn

#endif  // SLOTFILL_ITN_H_
