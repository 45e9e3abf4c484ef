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

#include "slotfill/itn.h"

#include <array>
#include <cctype>
#include <cstdio>
#include <map>
#include <unordered_map>
#include <vector>

#include "slotfill/text_norm.h"

namespace slotfill::itn {

namespace {

inline bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
inline bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

// ---------------------------------------------------------------------------
// Unit scanning. A "unit" is a maximal run of digits or a maximal run of
// letters; the gap string between consecutive units is kept so patterns can
// insist on specific separators (":" for clock times, "" for "7pm").
// ---------------------------------------------------------------------------

struct Unit {
  std::string text;       // case-folded
  size_t start = 0;       // byte offsets into the scanned string
  size_t end = 0;
  bool digits = false;
  std::string gap_before; // raw characters between previous unit and this one
};

std::vector<Unit> scan_units(const std::string& s) {
  std::vector<Unit> units;
  size_t i = 0;
  size_t gap_start = 0;
  while (i < s.size()) {
    if (is_digit(s[i]) || is_alpha(s[i])) {
      const bool dig = is_digit(s[i]);
      size_t j = i;
      while (j < s.size() && (dig ? is_digit(s[j]) : is_alpha(s[j]))) ++j;
      Unit u;
      u.text = to_lower_ascii(s.substr(i, j - i));
      u.start = i;
      u.end = j;
      u.digits = dig;
      u.gap_before = s.substr(gap_start, i - gap_start);
      units.push_back(std::move(u));
      i = j;
      gap_start = j;
    } else {
      ++i;
    }
  }
  return units;
}

bool gap_is(const std::string& gap, std::string_view allowed) {
  for (char c : gap) {
    if (allowed.find(c) == std::string_view::npos) return false;
  }
  return true;
}
bool gap_spacey(const std::string& gap) { return gap_is(gap, " \t\r\n"); }
bool gap_word(const std::string& gap) { return !gap.empty() && gap_is(gap, " \t\r\n-"); }

// Digit units glued to ':' or '-' belong to clock/date canonicals; only the
// colon-time and canonical-date patterns may consume them.
bool colon_dash_chained(const std::vector<Unit>& units, size_t i) {
  auto joined = [](const std::string& gap) {
    return gap.find(':') != std::string::npos || gap.find('-') != std::string::npos;
  };
  if (joined(units[i].gap_before)) return true;
  if (i + 1 < units.size() && joined(units[i + 1].gap_before)) return true;
  return false;
}

// "14159" in "3.14159": the fractional half of a decimal number.
bool decimal_continuation(const std::vector<Unit>& units, size_t i) {
  return units[i].digits && units[i].gap_before == "." && i > 0 && units[i - 1].digits;
}

// "3" in "3.14159".
bool decimal_lead(const std::vector<Unit>& units, size_t i) {
  return units[i].digits && i + 1 < units.size() && units[i + 1].digits &&
         units[i + 1].gap_before == ".";
}

// Full guard for day/year operands: anything taking part in a joined
// numeric form is off limits.
bool unit_chained(const std::vector<Unit>& units, size_t i) {
  return colon_dash_chained(units, i) || decimal_continuation(units, i) ||
         decimal_lead(units, i);
}

// A digit unit directly after "$" is a money amount, never an hour or day.
bool dollar_attached(const Unit& u) {
  const std::string& gap = u.gap_before;
  size_t p = gap.find_last_of('$');
  return p != std::string::npos && gap.find_first_not_of(" \t", p + 1) == std::string::npos;
}

// ---------------------------------------------------------------------------
// Spelled cardinals, 0..999,999.
// ---------------------------------------------------------------------------

const std::unordered_map<std::string, int>& unit_words() {
  static const std::unordered_map<std::string, int> m = {
      {"zero", 0}, {"one", 1}, {"two", 2},   {"three", 3}, {"four", 4},
      {"five", 5}, {"six", 6}, {"seven", 7}, {"eight", 8}, {"nine", 9}};
  return m;
}
const std::unordered_map<std::string, int>& teen_words() {
  static const std::unordered_map<std::string, int> m = {
      {"ten", 10},      {"eleven", 11},  {"twelve", 12},    {"thirteen", 13},
      {"fourteen", 14}, {"fifteen", 15}, {"sixteen", 16},   {"seventeen", 17},
      {"eighteen", 18}, {"nineteen", 19}};
  return m;
}
const std::unordered_map<std::string, int>& tens_words() {
  static const std::unordered_map<std::string, int> m = {
      {"twenty", 20}, {"thirty", 30}, {"forty", 40},  {"fifty", 50},
      {"sixty", 60},  {"seventy", 70}, {"eighty", 80}, {"ninety", 90}};
  return m;
}

struct NumMatch {
  long value = 0;
  size_t consumed = 0;  // units consumed
  bool single_digit_word = false;
};

// Word at unit index i, requiring a composable gap for i > first.
bool word_at(const std::vector<Unit>& units, size_t i, size_t first) {
  if (i >= units.size() || units[i].digits) return false;
  if (i > first && !gap_word(units[i].gap_before)) return false;
  return true;
}

// 0..99 from spelled words starting at i.
NumMatch parse_small(const std::vector<Unit>& units, size_t i, size_t first) {
  NumMatch none;
  if (!word_at(units, i, first)) return none;
  const std::string& w = units[i].text;
  if (auto it = tens_words().find(w); it != tens_words().end()) {
    NumMatch m{it->second, 1, false};
    if (word_at(units, i + 1, first)) {
      if (auto u = unit_words().find(units[i + 1].text);
          u != unit_words().end() && u->second > 0) {
        m.value += u->second;
        m.consumed = 2;
      }
    }
    return m;
  }
  if (auto it = teen_words().find(w); it != teen_words().end()) return {it->second, 1, false};
  if (auto it = unit_words().find(w); it != unit_words().end())
    return {it->second, 1, it->second <= 9};
  return none;
}

// small ["hundred" ["and"] [small]]  ->  0..9999 ("nineteen hundred" style).
NumMatch parse_segment(const std::vector<Unit>& units, size_t i, size_t first) {
  NumMatch none;
  if (word_at(units, i, first) && units[i].text == "hundred") return {100, 1, false};
  NumMatch small = parse_small(units, i, first);
  if (small.consumed == 0) return none;
  size_t j = i + small.consumed;
  if (word_at(units, j, first) && units[j].text == "hundred") {
    NumMatch m{small.value * 100, small.consumed + 1, false};
    size_t k = j + 1;
    size_t after_and = k;
    if (word_at(units, k, first) && units[k].text == "and") after_and = k + 1;
    NumMatch rest = parse_small(units, after_and, first);
    if (rest.consumed > 0 && rest.value < 100) {
      m.value += rest.value;
      m.consumed = (after_and - i) + rest.consumed;
    }
    return m;
  }
  return small;
}

// segment ["thousand" ["and"] [segment]]  -> 0..999,999 and a bit beyond;
// anything larger is left alone by the caller's vocabulary bounds.
NumMatch parse_cardinal(const std::vector<Unit>& units, size_t i) {
  NumMatch none;
  const size_t first = i;
  if (word_at(units, i, first) && units[i].text == "thousand") return {1000, 1, false};
  NumMatch seg = parse_segment(units, i, first);
  if (seg.consumed == 0) return none;
  size_t j = i + seg.consumed;
  if (word_at(units, j, first) && units[j].text == "thousand" && seg.value <= 999) {
    NumMatch m{seg.value * 1000, seg.consumed + 1, false};
    size_t k = j + 1;
    size_t after_and = k;
    if (word_at(units, k, first) && units[k].text == "and") after_and = k + 1;
    NumMatch rest = parse_segment(units, after_and, first);
    if (rest.consumed > 0 && rest.value < 1000) {
      m.value += rest.value;
      m.consumed = (after_and - i) + rest.consumed;
    }
    return m;
  }
  return seg;
}

// ---------------------------------------------------------------------------
// Rewrites: span replacements over the scanned string.
// ---------------------------------------------------------------------------

struct Rewrite {
  size_t begin = 0;
  size_t end = 0;
  std::string replacement;
  bool single_digit = false;  // spelled single digit, mergeable into runs
};

std::string apply_rewrites(const std::string& s, const std::vector<Rewrite>& rewrites) {
  std::string out;
  out.reserve(s.size());
  size_t pos = 0;
  for (const Rewrite& r : rewrites) {
    out.append(s, pos, r.begin - pos);
    out.append(r.replacement);
    pos = r.end;
  }
  out.append(s, pos, std::string::npos);
  return out;
}

bool ordinal_suffix(const std::string& w) {
  return w == "st" || w == "nd" || w == "rd" || w == "th";
}

std::vector<Rewrite> find_number_rewrites(const std::string& s) {
  const std::vector<Unit> units = scan_units(s);
  std::vector<Rewrite> raw;
  size_t i = 0;
  while (i < units.size()) {
    // Digit ordinals: "3rd" -> "3".
    if (units[i].digits && i + 1 < units.size() && units[i + 1].gap_before.empty() &&
        ordinal_suffix(units[i + 1].text)) {
      raw.push_back({units[i].start, units[i + 1].end, units[i].text, false});
      i += 2;
      continue;
    }
    if (!units[i].digits) {
      NumMatch m = parse_cardinal(units, i);
      if (m.consumed > 0) {
        raw.push_back({units[i].start, units[i + m.consumed - 1].end,
                       std::to_string(m.value), m.single_digit_word});
        i += m.consumed;
        continue;
      }
    }
    ++i;
  }
  // Merge adjacent spelled single digits separated by whitespace only:
  // "one two three" -> "123". Already-numeric input is never merged.
  std::vector<Rewrite> merged;
  for (size_t k = 0; k < raw.size(); ++k) {
    if (!raw[k].single_digit) {
      merged.push_back(raw[k]);
      continue;
    }
    Rewrite run = raw[k];
    while (k + 1 < raw.size() && raw[k + 1].single_digit &&
           gap_spacey(s.substr(raw[k].end, raw[k + 1].begin - raw[k].end))) {
      run.replacement += raw[k + 1].replacement;
      run.end = raw[k + 1].end;
      ++k;
    }
    run.single_digit = run.replacement.size() == 1;
    merged.push_back(run);
  }
  return merged;
}

// ---------------------------------------------------------------------------
// Clock times.
// ---------------------------------------------------------------------------

struct Meridiem {
  bool matched = false;
  bool pm = false;
  size_t consumed = 0;
};

Meridiem match_meridiem(const std::vector<Unit>& units, size_t i) {
  if (i >= units.size() || units[i].digits) return {};
  if (!gap_is(units[i].gap_before, " .")) return {};
  const std::string& w = units[i].text;
  if (w == "am" || w == "pm") return {true, w == "pm", 1};
  if ((w == "a" || w == "p") && i + 1 < units.size() && units[i + 1].text == "m" &&
      gap_is(units[i + 1].gap_before, " .")) {
    return {true, w == "p", 2};
  }
  return {};
}

size_t match_oclock(const std::vector<Unit>& units, size_t i) {
  if (i >= units.size() || units[i].digits || !gap_spacey(units[i].gap_before)) return 0;
  if (units[i].text == "oclock") return 1;
  if (units[i].text == "o" && i + 1 < units.size() && units[i + 1].text == "clock" &&
      gap_is(units[i + 1].gap_before, "' ")) {
    return 2;
  }
  return 0;
}

struct ValueMatch {
  int value = -1;
  size_t consumed = 0;
};

// An hour or minute operand: a short digit run or spelled words (0..59).
ValueMatch match_clock_value(const std::vector<Unit>& units, size_t i, bool two_digit_only) {
  if (i >= units.size()) return {};
  if (units[i].digits) {
    if (two_digit_only && units[i].text.size() != 2) return {};
    if (units[i].text.size() > 2) return {};
    return {std::atoi(units[i].text.c_str()), 1};
  }
  NumMatch m = parse_small(units, i, i);
  if (m.consumed == 0 || m.value > 59) return {};
  return {static_cast<int>(m.value), m.consumed};
}

std::string format_hhmm(int h, int m) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%02d:%02d", h, m);
  return buf;
}

std::vector<Rewrite> find_time_rewrites(const std::string& s) {
  const std::vector<Unit> units = scan_units(s);
  std::vector<Rewrite> out;
  // Extra meridiem tokens right after a match carry no information; absorb
  // them so a second pass sees the same string.
  auto absorb_meridiems = [&units](size_t last) {
    for (Meridiem extra = match_meridiem(units, last + 1); extra.matched;
         extra = match_meridiem(units, last + 1)) {
      last += extra.consumed;
    }
    return last;
  };
  size_t i = 0;
  while (i < units.size()) {
    // "H:MM" [meridiem]
    if (units[i].digits && !dollar_attached(units[i]) && units[i].text.size() <= 2 &&
        i + 1 < units.size() && units[i + 1].digits && units[i + 1].text.size() == 2 &&
        units[i + 1].gap_before == ":") {
      int h = std::atoi(units[i].text.c_str());
      int m = std::atoi(units[i + 1].text.c_str());
      Meridiem mer = match_meridiem(units, i + 2);
      if (m <= 59) {
        if (mer.matched && h >= 1 && h <= 12) {
          int hh = mer.pm ? (h == 12 ? 12 : h + 12) : (h == 12 ? 0 : h);
          size_t last = absorb_meridiems(i + 1 + mer.consumed);
          out.push_back({units[i].start, units[last].end, format_hhmm(hh, m)});
          i = last + 1;
          continue;
        }
        if (!mer.matched && h <= 23) {
          out.push_back({units[i].start, units[i + 1].end, format_hhmm(h, m)});
          i += 2;
          continue;
        }
      }
    }
    // hour [minutes] meridiem   |   hour oclock [meridiem]
    if (!(units[i].digits &&
          (colon_dash_chained(units, i) || dollar_attached(units[i]) ||
           decimal_continuation(units, i)))) {
      ValueMatch hour = match_clock_value(units, i, false);
      if (hour.consumed > 0 && hour.value >= 0 && hour.value <= 23) {
        size_t j = i + hour.consumed;
        // minutes only count when a meridiem follows them
        const bool min_needs_two = j < units.size() && units[j].digits;
        const bool min_gap_ok =
            j < units.size() && gap_is(units[j].gap_before, " \t\r\n.");
        ValueMatch mins = min_gap_ok ? match_clock_value(units, j, min_needs_two)
                                     : ValueMatch{};
        size_t j_after_min = j + (mins.consumed > 0 && mins.value <= 59 ? mins.consumed : 0);
        bool has_min = j_after_min > j;
        Meridiem mer = match_meridiem(units, j_after_min);
        if (mer.matched && hour.value >= 1 && hour.value <= 12) {
          int hh = mer.pm ? (hour.value == 12 ? 12 : hour.value + 12)
                          : (hour.value == 12 ? 0 : hour.value);
          int mm = has_min ? mins.value : 0;
          size_t last = absorb_meridiems(j_after_min + mer.consumed - 1);
          out.push_back({units[i].start, units[last].end, format_hhmm(hh, mm)});
          i = last + 1;
          continue;
        }
        size_t oc = match_oclock(units, j);
        if (oc > 0) {
          Meridiem mer2 = match_meridiem(units, j + oc);
          int hh = hour.value;
          if (mer2.matched && hh >= 1 && hh <= 12) {
            hh = mer2.pm ? (hh == 12 ? 12 : hh + 12) : (hh == 12 ? 0 : hh);
          }
          size_t last = absorb_meridiems(j + oc + mer2.consumed - 1);
          out.push_back({units[i].start, units[last].end, format_hhmm(hh, 0)});
          i = last + 1;
          continue;
        }
      }
    }
    ++i;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dates. Month-word anchored; day required; year optional ("MM-DD" without).
// ---------------------------------------------------------------------------

const std::map<std::string, int>& month_words() {
  static const std::map<std::string, int> m = {
      {"january", 1},  {"jan", 1},  {"february", 2}, {"feb", 2},  {"march", 3},
      {"mar", 3},      {"april", 4}, {"apr", 4},      {"may", 5},  {"june", 6},
      {"jun", 6},      {"july", 7},  {"jul", 7},      {"august", 8}, {"aug", 8},
      {"september", 9}, {"sept", 9}, {"sep", 9},      {"october", 10}, {"oct", 10},
      {"november", 11}, {"nov", 11}, {"december", 12}, {"dec", 12}};
  return m;
}

const std::unordered_map<std::string, int>& ordinal_day_words() {
  static const std::unordered_map<std::string, int> m = {
      {"first", 1},       {"second", 2},     {"third", 3},      {"fourth", 4},
      {"fifth", 5},       {"sixth", 6},      {"seventh", 7},    {"eighth", 8},
      {"ninth", 9},       {"tenth", 10},     {"eleventh", 11},  {"twelfth", 12},
      {"thirteenth", 13}, {"fourteenth", 14}, {"fifteenth", 15}, {"sixteenth", 16},
      {"seventeenth", 17}, {"eighteenth", 18}, {"nineteenth", 19}, {"twentieth", 20},
      {"thirtieth", 30}};
  return m;
}

int days_in_month(int month, int year) {
  static const int lens[13] = {0, 31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2 && year > 0) {
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return lens[month];
}

// Day-of-month; digit token, spelled ordinal, or "20/30 + ordinal unit"
// left behind by the number pass ("twenty fifth" -> "20 fifth" -> 25).
ValueMatch match_day(const std::vector<Unit>& units, size_t i) {
  if (i >= units.size()) return {};
  if (units[i].digits && (unit_chained(units, i) || dollar_attached(units[i]))) return {};
  if (units[i].digits && units[i].text.size() <= 2) {
    int d = std::atoi(units[i].text.c_str());
    if (d >= 1 && d <= 31) {
      if ((d == 20 || d == 30) && i + 1 < units.size() && !units[i + 1].digits &&
          gap_spacey(units[i + 1].gap_before)) {
        auto it = ordinal_day_words().find(units[i + 1].text);
        if (it != ordinal_day_words().end() && it->second <= 9) {
          return {d + it->second, 2};
        }
      }
      return {d, 1};
    }
    return {};
  }
  auto it = ordinal_day_words().find(units[i].text);
  if (it != ordinal_day_words().end()) return {it->second, 1};
  return {};
}

// Year: "2024", or a split spoken year "20 24" / "19 99".
ValueMatch match_year(const std::vector<Unit>& units, size_t i) {
  if (i >= units.size() || !units[i].digits) return {};
  if (unit_chained(units, i) || dollar_attached(units[i])) return {};
  if (units[i].text.size() == 4) return {std::atoi(units[i].text.c_str()), 1};
  if (units[i].text.size() == 2 && i + 1 < units.size() && units[i + 1].digits &&
      units[i + 1].text.size() == 2 && gap_spacey(units[i + 1].gap_before) &&
      !unit_chained(units, i + 1)) {
    int hi = std::atoi(units[i].text.c_str());
    int lo = std::atoi(units[i + 1].text.c_str());
    if (hi >= 10) return {hi * 100 + lo, 2};
  }
  return {};
}

std::string format_date(int year, int month, int day) {
  char buf[40];
  if (year > 0) {
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  } else {
    std::snprintf(buf, sizeof(buf), "%02d-%02d", month, day);
  }
  return buf;
}

bool canonical_date_token(const Unit& a, const std::vector<Unit>& units, size_t i,
                          size_t* consumed) {
  // "YYYY-MM-DD" and "MM-DD" arrive as digit units joined by "-" gaps.
  if (!a.digits) return false;
  if (a.text.size() == 4 && i + 2 < units.size() && units[i + 1].digits &&
      units[i + 1].text.size() == 2 && units[i + 1].gap_before == "-" &&
      units[i + 2].digits && units[i + 2].text.size() == 2 &&
      units[i + 2].gap_before == "-") {
    *consumed = 3;
    return true;
  }
  if (a.text.size() == 2 && i + 1 < units.size() && units[i + 1].digits &&
      units[i + 1].text.size() == 2 && units[i + 1].gap_before == "-") {
    int mo = std::atoi(a.text.c_str());
    int dd = std::atoi(units[i + 1].text.c_str());
    if (mo >= 1 && mo <= 12 && dd >= 1 && dd <= 31) {
      *consumed = 2;
      return true;
    }
  }
  return false;
}

std::vector<Rewrite> find_date_rewrites(const std::string& s) {
  const std::vector<Unit> units = scan_units(s);
  std::vector<Rewrite> out;
  std::vector<bool> consumed(units.size(), false);
  size_t i = 0;
  while (i < units.size()) {
    size_t n = 0;
    if (canonical_date_token(units[i], units, i, &n)) {
      out.push_back({units[i].start, units[i + n - 1].end,
                     std::string(s, units[i].start, units[i + n - 1].end - units[i].start)});
      for (size_t k = i; k < i + n; ++k) consumed[k] = true;
      i += n;
      continue;
    }
    if (!units[i].digits) {
      auto mo = month_words().find(units[i].text);
      if (mo != month_words().end()) {
        // day before: "5 march" or "5 of march"
        size_t begin_unit = i;
        ValueMatch day;
        if (i >= 1) {
          size_t prev = i - 1;
          if (!units[prev].digits && units[prev].text == "of" && prev >= 1) {
            ValueMatch d = match_day(units, prev - 1);
            if (d.consumed == 1 && !consumed[prev - 1]) {
              day = d;
              begin_unit = prev - 1;
            }
          } else {
            ValueMatch d = match_day(units, prev);
            if (d.consumed == 1 && units[prev].digits && !consumed[prev]) {
              day = d;
              begin_unit = prev;
            }
          }
        }
        size_t j = i + 1;
        if (day.consumed == 0) {
          ValueMatch d = match_day(units, j);
          if (d.consumed > 0 && gap_spacey(units[j].gap_before)) {
            day = d;
            j += d.consumed;
          }
        }
        if (day.consumed > 0) {
          ValueMatch year = match_year(units, j);
          size_t end_unit = year.consumed > 0 ? j + year.consumed - 1 : j - 1;
          if (begin_unit < i) end_unit = std::max(end_unit, i);
          int y = year.consumed > 0 ? year.value : 0;
          if (day.value >= 1 && day.value <= days_in_month(mo->second, y)) {
            out.push_back({units[begin_unit].start, units[end_unit].end,
                           format_date(y, mo->second, day.value)});
            for (size_t k = begin_unit; k <= end_unit; ++k) consumed[k] = true;
            i = end_unit + 1;
            continue;
          }
        }
      }
    }
    ++i;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Money and durations.
// ---------------------------------------------------------------------------

bool money_word(const std::string& w) {
  return w == "dollar" || w == "dollars" || w == "buck" || w == "bucks" || w == "usd";
}

std::vector<Rewrite> find_money_rewrites(const std::string& s) {
  const std::vector<Unit> units = scan_units(s);
  std::vector<Rewrite> out;
  size_t i = 0;
  while (i < units.size()) {
    if (units[i].digits && !colon_dash_chained(units, i) &&
        !decimal_continuation(units, i)) {
      // Long decimals are not cent amounts; leave the whole number alone.
      if (decimal_lead(units, i) && units[i + 1].text.size() > 2) {
        ++i;
        continue;
      }
      // "$20" or "$ 20": a dollar sign followed only by spaces before digits.
      size_t dollar_at = std::string::npos;
      {
        const std::string& gap = units[i].gap_before;
        size_t p = gap.find_last_of('$');
        if (p != std::string::npos && gap.find_first_not_of(" \t", p + 1) == std::string::npos) {
          dollar_at = units[i].start - (gap.size() - p);
        }
      }
      size_t j = i;
      std::string amount = units[i].text;
      if (j + 1 < units.size() && units[j + 1].digits && units[j + 1].gap_before == "." &&
          units[j + 1].text.size() <= 2) {
        amount += "." + units[j + 1].text;
        ++j;
      }
      if (dollar_at != std::string::npos) {
        out.push_back({dollar_at, units[j].end, "$" + amount});
        i = j + 1;
        continue;
      }
      if (j + 1 < units.size() && !units[j + 1].digits &&
          gap_spacey(units[j + 1].gap_before) && money_word(units[j + 1].text)) {
        out.push_back({units[i].start, units[j + 1].end, "$" + amount});
        i = j + 2;
        continue;
      }
    }
    ++i;
  }
  return out;
}

const std::unordered_map<std::string, std::string>& duration_units() {
  static const std::unordered_map<std::string, std::string> m = {
      {"sec", "seconds"},    {"secs", "seconds"},   {"second", "seconds"},
      {"seconds", "seconds"}, {"min", "minutes"},    {"mins", "minutes"},
      {"minute", "minutes"},  {"minutes", "minutes"}, {"hr", "hours"},
      {"hrs", "hours"},       {"hour", "hours"},     {"hours", "hours"},
      {"day", "days"},        {"days", "days"},      {"week", "weeks"},
      {"weeks", "weeks"},     {"month", "months"},   {"months", "months"},
      {"year", "years"},      {"years", "years"}};
  return m;
}

std::vector<Rewrite> find_duration_rewrites(const std::string& s) {
  const std::vector<Unit> units = scan_units(s);
  std::vector<Rewrite> out;
  size_t i = 0;
  while (i + 1 < units.size()) {
    if (units[i].digits && !colon_dash_chained(units, i) &&
        !decimal_continuation(units, i) && !dollar_attached(units[i]) &&
        !units[i + 1].digits && gap_spacey(units[i + 1].gap_before)) {
      auto it = duration_units().find(units[i + 1].text);
      if (it != duration_units().end()) {
        out.push_back({units[i].start, units[i + 1].end, units[i].text + " " + it->second});
        i += 2;
        continue;
      }
    }
    ++i;
  }
  return out;
}

// ---------------------------------------------------------------------------
// apply_itn plumbing.
// ---------------------------------------------------------------------------

std::string map_typographic_ascii(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size();) {
    if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
        static_cast<unsigned char>(s[i + 1]) == 0x80) {
      unsigned char b = static_cast<unsigned char>(s[i + 2]);
      if (b == 0x98 || b == 0x99) {
        out.push_back('\'');
        i += 3;
        continue;
      }
      if (b == 0x9C || b == 0x9D) {
        out.push_back('"');
        i += 3;
        continue;
      }
      if (b == 0x93 || b == 0x94) {
        out.push_back('-');
        i += 3;
        continue;
      }
    }
    out.push_back(s[i]);
    ++i;
  }
  return out;
}

constexpr char kProtect = '\x01';

bool email_local_char(char c) {
  return is_digit(c) || is_alpha(c) || c == '.' || c == '_' || c == '%' || c == '+' || c == '-';
}
bool email_domain_char(char c) { return is_digit(c) || is_alpha(c) || c == '.' || c == '-'; }

std::string protect_emails(const std::string& s, std::vector<std::string>* found) {
  std::string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '@' && i > 0) {
      size_t lb = out.size();
      while (lb > 0 && email_local_char(out[lb - 1])) --lb;
      size_t de = i + 1;
      while (de < s.size() && email_domain_char(s[de])) ++de;
      std::string local = out.substr(lb);
      std::string domain = s.substr(i + 1, de - i - 1);
      while (!domain.empty() && (domain.back() == '.' || domain.back() == '-'))
        domain.pop_back();
      size_t last_dot = domain.rfind('.');
      bool tld_ok = last_dot != std::string::npos && domain.size() - last_dot - 1 >= 2;
      if (tld_ok) {
        for (size_t k = last_dot + 1; k < domain.size(); ++k) {
          if (!is_alpha(domain[k])) tld_ok = false;
        }
      }
      if (!local.empty() && !domain.empty() && tld_ok) {
        out.resize(lb);
        out.push_back(kProtect);
        out += std::to_string(found->size());
        out.push_back(kProtect);
        found->push_back(local + "@" + domain);
        i = i + 1 + domain.size();
        continue;
      }
    }
    out.push_back(s[i]);
    ++i;
  }
  return out;
}

std::string restore_emails(const std::string& s, const std::vector<std::string>& found) {
  std::string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] == kProtect) {
      size_t j = s.find(kProtect, i + 1);
      if (j != std::string::npos) {
        size_t idx = static_cast<size_t>(std::atoi(s.substr(i + 1, j - i - 1).c_str()));
        if (idx < found.size()) out += found[idx];
        i = j + 1;
        continue;
      }
    }
    out.push_back(s[i]);
    ++i;
  }
  return out;
}

std::string strip_punctuation(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    char prev = out.empty() ? '\0' : out.back();
    char next = i + 1 < s.size() ? s[i + 1] : '\0';
    switch (c) {
      case '\'':
        break;  // joins: "joe's" -> "joes"
      case '&':
        out += " and ";
        break;
      case '.':
        if (is_digit(prev) && is_digit(next)) {
          out.push_back(c);          // decimals
        } else if (is_alpha(prev) && is_alpha(next)) {
          /* join: "p.m" -> "pm" */
        } else {
          out.push_back(' ');
        }
        break;
      case ':':
        if (is_digit(prev) && is_digit(next)) out.push_back(c);
        else out.push_back(' ');
        break;
      case '-':
        if (is_digit(prev) && is_digit(next)) out.push_back(c);
        else out.push_back(' ');
        break;
      case ',':
        if (is_digit(prev) && is_digit(next)) { /* join: "1,000" -> "1000" */ }
        else out.push_back(' ');
        break;
      case '+':
        if (is_digit(next)) out.push_back(c);
        else out.push_back(' ');
        break;
      case '$':
      case '%':
      case '@':
      case kProtect:
        out.push_back(c);
        break;
      default:
        if (is_digit(c) || is_alpha(c) || std::isspace(static_cast<unsigned char>(c)) ||
            static_cast<unsigned char>(c) >= 0x80) {
          out.push_back(c);
        } else {
          out.push_back(' ');
        }
    }
  }
  return out;
}

bool token_is_money(const std::string& t) {
  if (t.size() < 2 || t[0] != '$') return false;
  bool dot = false;
  for (size_t i = 1; i < t.size(); ++i) {
    if (t[i] == '.' && !dot) dot = true;
    else if (!is_digit(t[i])) return false;
  }
  return true;
}

}  // namespace

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Time: return "time";
    case Kind::Date: return "date";
    case Kind::Number: return "number";
    case Kind::Money: return "money";
    case Kind::Duration: return "duration";
    case Kind::Email: return "email";
    case Kind::Plain: return "plain";
  }
  return "plain";
}

std::optional<Kind> kind_from_name(std::string_view name) {
  std::string n = to_lower_ascii(name);
  if (n == "time") return Kind::Time;
  if (n == "date") return Kind::Date;
  if (n == "number" || n == "cardinal") return Kind::Number;
  if (n == "money") return Kind::Money;
  if (n == "duration") return Kind::Duration;
  if (n == "email") return Kind::Email;
  if (n == "plain") return Kind::Plain;
  return std::nullopt;
}

namespace {
std::vector<Span> spans_of(const std::vector<Rewrite>& rewrites) {
  std::vector<Span> out;
  out.reserve(rewrites.size());
  for (const Rewrite& r : rewrites) out.push_back({r.begin, r.end});
  return out;
}
}  // namespace

std::vector<Span> find_time_spans(const std::string& text) {
  return spans_of(find_time_rewrites(text));
}
std::vector<Span> find_date_spans(const std::string& text) {
  return spans_of(find_date_rewrites(text));
}
std::vector<Span> find_money_spans(const std::string& text) {
  return spans_of(find_money_rewrites(text));
}
std::vector<Span> find_duration_spans(const std::string& text) {
  return spans_of(find_duration_rewrites(text));
}

std::string normalize_number(const std::string& text) {
  return apply_rewrites(text, find_number_rewrites(text));
}

std::string normalize_time(const std::string& text) {
  return apply_rewrites(text, find_time_rewrites(text));
}

NormalizedValue apply_itn(const std::string& text) {
  NormalizedValue out;
  out.surface = text;

  std::string s = to_lower_ascii(map_typographic_ascii(text));
  std::vector<std::string> emails;
  s = protect_emails(s, &emails);
  if (!emails.empty()) out.kinds.insert(Kind::Email);
  s = strip_punctuation(s);
  s = collapse_whitespace(s);

  s = apply_rewrites(s, find_number_rewrites(s));

  auto time_rw = find_time_rewrites(s);
  if (!time_rw.empty()) out.kinds.insert(Kind::Time);
  s = apply_rewrites(s, time_rw);

  auto date_rw = find_date_rewrites(s);
  if (!date_rw.empty()) out.kinds.insert(Kind::Date);
  s = apply_rewrites(s, date_rw);

  auto money_rw = find_money_rewrites(s);
  s = apply_rewrites(s, money_rw);

  auto dur_rw = find_duration_rewrites(s);
  if (!dur_rw.empty()) out.kinds.insert(Kind::Duration);
  s = apply_rewrites(s, dur_rw);

  s = restore_emails(s, emails);
  s = collapse_whitespace(s);
  out.canonical = s;

  bool any_money = !money_rw.empty();
  const auto tokens = split_whitespace(s);
  bool all_digits = !tokens.empty();
  bool leftover_words = false;
  for (const auto& t : tokens) {
    if (token_is_money(t)) any_money = true;
    if (!is_digits(t)) all_digits = false;
    bool has_alpha = false;
    for (char c : t) {
      if (is_alpha(c)) has_alpha = true;
    }
    if (has_alpha && duration_units().count(t) == 0 && t.find('@') == std::string::npos) {
      leftover_words = true;
    }
  }
  if (any_money) out.kinds.insert(Kind::Money);
  if (all_digits) out.kinds.insert(Kind::Number);
  if (leftover_words || out.kinds.empty()) out.kinds.insert(Kind::Plain);
  return out;
}

}  // namespace slotfill::itn
