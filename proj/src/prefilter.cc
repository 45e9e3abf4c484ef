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

#include "slotfill/prefilter.h"

#include <algorithm>
#include <cctype>
#include <map>

#include "slotfill/errors.h"
#include "slotfill/itn.h"
#include "slotfill/label.h"
#include "slotfill/text_norm.h"

namespace slotfill::prefilter {

namespace {

inline bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Recognizer kinds the reference extractor knows. "phone" is only reachable
// through a pattern constraint; the rest map from entity_kind constraints.
enum class Rec { Email, Money, Date, Time, Cardinal, Duration, Phone };

void collect_recognizers(const constraints::ConstraintRule& rule, std::set<Rec>* out) {
  using constraints::Predicate;
  switch (rule.predicate) {
    case Predicate::EntityKindIs: {
      if (rule.kind == "email") out->insert(Rec::Email);
      else if (rule.kind == "money") out->insert(Rec::Money);
      else if (rule.kind == "date") out->insert(Rec::Date);
      else if (rule.kind == "time") out->insert(Rec::Time);
      else if (rule.kind == "number" || rule.kind == "cardinal") out->insert(Rec::Cardinal);
      else if (rule.kind == "duration") out->insert(Rec::Duration);
      break;
    }
    case Predicate::PartialCardinal:
      out->insert(Rec::Cardinal);
      break;
    case Predicate::Pattern:
      if (rule.pattern_id == "phone") out->insert(Rec::Phone);
      if (rule.pattern_id == "digits" || rule.pattern_id == "zipcode")
        out->insert(Rec::Cardinal);
      break;
    case Predicate::AllOf:
    case Predicate::AnyOf:
      for (const auto& child : rule.children) collect_recognizers(child, out);
      break;
    default:
      break;
  }
}

struct RawSpan {
  size_t begin = 0;
  size_t end = 0;
};

std::vector<RawSpan> scan_emails(const std::string& text) {
  std::vector<RawSpan> out;
  auto local_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '%' ||
           c == '+' || c == '-';
  };
  auto domain_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-';
  };
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '@') continue;
    size_t lb = i;
    while (lb > 0 && local_char(text[lb - 1])) --lb;
    size_t de = i + 1;
    while (de < text.size() && domain_char(text[de])) ++de;
    while (de > i + 1 && (text[de - 1] == '.' || text[de - 1] == '-')) --de;
    if (lb == i || de == i + 1) continue;
    std::string domain = text.substr(i + 1, de - i - 1);
    size_t dot = domain.rfind('.');
    if (dot == std::string::npos || domain.size() - dot - 1 < 2) continue;
    bool tld_ok = true;
    for (size_t k = dot + 1; k < domain.size(); ++k) {
      if (!std::isalpha(static_cast<unsigned char>(domain[k]))) tld_ok = false;
    }
    if (tld_ok) out.push_back({lb, de});
  }
  return out;
}

std::vector<RawSpan> scan_cardinals(const std::string& text) {
  std::vector<RawSpan> out;
  size_t i = 0;
  while (i < text.size()) {
    if (is_digit(text[i])) {
      size_t j = i;
      while (j < text.size() && is_digit(text[j])) ++j;
      // not part of a larger alnum token ("a1b2") and not a decimal tail
      bool left_ok = i == 0 || (!std::isalnum(static_cast<unsigned char>(text[i - 1])) &&
                                text[i - 1] != '.');
      bool right_ok = j == text.size() || !std::isalpha(static_cast<unsigned char>(text[j]));
      if (left_ok && right_ok) out.push_back({i, j});
      i = j;
    } else {
      ++i;
    }
  }
  return out;
}

std::vector<RawSpan> scan_phones(const std::string& text) {
  std::vector<RawSpan> out;
  size_t i = 0;
  while (i < text.size()) {
    if (is_digit(text[i]) || (text[i] == '+' && i + 1 < text.size() && is_digit(text[i + 1]))) {
      size_t j = i;
      size_t digits = 0;
      size_t last_digit_end = i;
      while (j < text.size()) {
        char c = text[j];
        if (is_digit(c)) {
          ++digits;
          last_digit_end = j + 1;
          ++j;
        } else if ((c == '-' || c == ' ' || c == '(' || c == ')' || c == '.' || c == '+') &&
                   j + 1 < text.size() &&
                   (is_digit(text[j + 1]) || text[j + 1] == '(' || text[j + 1] == ')')) {
          ++j;
        } else {
          break;
        }
      }
      if (digits >= 7) out.push_back({i, last_digit_end});
      i = std::max(j, i + 1);
    } else {
      ++i;
    }
  }
  return out;
}

std::vector<RawSpan> from_itn_spans(const std::vector<itn::Span>& spans) {
  std::vector<RawSpan> out;
  out.reserve(spans.size());
  for (const auto& s : spans) out.push_back({s.begin, s.end});
  return out;
}

const std::vector<RawSpan>& spans_for(Rec rec,
                                      std::map<Rec, std::vector<RawSpan>>& cache,
                                      const std::string& text) {
  auto it = cache.find(rec);
  if (it != cache.end()) return it->second;
  std::vector<RawSpan> spans;
  switch (rec) {
    case Rec::Email: spans = scan_emails(text); break;
    case Rec::Money: spans = from_itn_spans(itn::find_money_spans(text)); break;
    case Rec::Date: spans = from_itn_spans(itn::find_date_spans(text)); break;
    case Rec::Time: spans = from_itn_spans(itn::find_time_spans(text)); break;
    case Rec::Cardinal: spans = scan_cardinals(text); break;
    case Rec::Duration: spans = from_itn_spans(itn::find_duration_spans(text)); break;
    case Rec::Phone: spans = scan_phones(text); break;
  }
  return cache.emplace(rec, std::move(spans)).first->second;
}

double score_for(Rec rec) {
  switch (rec) {
    case Rec::Email:
    case Rec::Money:
    case Rec::Date:
    case Rec::Time:
      return 0.9;
    default:
      return 0.8;
  }
}

}  // namespace

std::vector<Candidate> extract_candidates(const std::string& text,
                                          const SlotRegistry& registry) {
  std::vector<Candidate> out;
  if (text.empty()) return out;
  std::map<Rec, std::vector<RawSpan>> cache;
  const std::string folded = to_lower_ascii(text);

  for (const SlotLabelRecord& record : registry.snapshot()) {
    if (record.kind != SlotKind::Extractive) continue;
    std::set<Rec> recs;
    for (const auto& rule : record.rules) collect_recognizers(rule, &recs);
    for (Rec rec : recs) {
      for (const RawSpan& span : spans_for(rec, cache, text)) {
        out.push_back({record.canonical, text.substr(span.begin, span.end - span.begin),
                       span.begin, span.end, score_for(rec)});
      }
    }
    for (const std::string& entry : record.gazetteer) {
      const std::string needle = to_lower_ascii(entry);
      if (needle.empty()) continue;
      size_t pos = 0;
      while ((pos = folded.find(needle, pos)) != std::string::npos) {
        out.push_back({record.canonical, text.substr(pos, needle.size()), pos,
                       pos + needle.size(), 1.0});
        pos += needle.size();
      }
    }
  }
  return out;
}

std::vector<Candidate> extract_candidates(const std::string& text, const SlotRegistry& registry,
                                          ExtractorBackend& backend) {
  std::vector<std::string> labels;
  for (const SlotLabelRecord& record : registry.snapshot()) {
    if (record.kind == SlotKind::Extractive) labels.push_back(record.canonical);
  }
  std::vector<Candidate> out;
  for (const ExtractorBackend::Entity& e : backend.extract(text, labels)) {
    Candidate c;
    c.label = canonicalize_label(e.label);
    c.score = std::clamp(e.score, 0.0, 1.0);
    if (e.end > e.start && e.end <= text.size() &&
        text.compare(e.start, e.end - e.start, e.text) == 0) {
      c.start = e.start;
      c.end = e.end;
      c.value = e.text;
    } else {
      // Unreliable offsets from the backend: re-anchor on the surface text.
      size_t pos = text.find(e.text);
      if (pos == std::string::npos || e.text.empty()) continue;
      c.start = pos;
      c.end = pos + e.text.size();
      c.value = e.text;
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::set<std::string> detect_abstractive(const std::string& context_plus_text,
                                         const SlotRegistry& registry) {
  std::set<std::string> hits;
  for (const SlotLabelRecord& record : registry.snapshot()) {
    if (record.kind != SlotKind::Abstractive) continue;
    for (const std::string& trigger : record.triggers) {
      if (contains_folded(context_plus_text, trigger)) {
        hits.insert(record.canonical);
        break;
      }
    }
  }
  return hits;
}

std::vector<std::string> narrow_labels(const std::vector<std::string>& requested,
                                       const std::vector<Candidate>& candidates,
                                       const std::set<std::string>& abstractive_hits) {
  std::set<std::string> proposed(abstractive_hits);
  for (const Candidate& c : candidates) proposed.insert(c.label);
  std::vector<std::string> out;
  for (const std::string& label : requested) {
    if (proposed.count(label)) out.push_back(label);
  }
  return out;
}

}  // namespace slotfill::prefilter
