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

#include "slotfill/evaluation.h"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "slotfill/errors.h"
#include "slotfill/itn.h"
#include "slotfill/label.h"
#include "slotfill/text_norm.h"

namespace slotfill::eval {

using nlohmann::json;

namespace {

const std::set<std::string>& stopwords() {
  static const std::set<std::string> s = {"the", "a",  "an", "of", "and", "or", "to",
                                          "for", "in", "on", "at", "is",  "it", "was",
                                          "be",  "um", "uh", "yes", "no", "ok", "okay"};
  return s;
}

bool token_subset(const std::string& canon_a, const std::string& canon_b) {
  std::set<std::string> a, b;
  for (const auto& t : split_whitespace(canon_a)) a.insert(t);
  for (const auto& t : split_whitespace(canon_b)) b.insert(t);
  if (a.empty() || b.empty()) return false;
  const std::set<std::string>& small = a.size() <= b.size() ? a : b;
  const std::set<std::string>& large = a.size() <= b.size() ? b : a;
  bool all_stop = true;
  for (const std::string& t : small) {
    if (!large.count(t)) return false;
    if (!stopwords().count(t)) all_stop = false;
  }
  return !all_stop;  // single-stopword values earn no credit
}

MatchRule classify(const itn::NormalizedValue& p, const itn::NormalizedValue& r,
                   const SemanticMatcher* semantic) {
  if (p.canonical.empty() && r.canonical.empty()) {
    // Punctuation-only surfaces: credit only byte-identical values.
    return p.surface == r.surface ? MatchRule::ExactNormalized : MatchRule::NoMatch;
  }
  if (p.canonical == r.canonical) {
    if (p.has(itn::Kind::Time) && r.has(itn::Kind::Time)) return MatchRule::TimeEquivalence;
    if (p.has(itn::Kind::Number) && r.has(itn::Kind::Number))
      return MatchRule::NumberEquivalence;
    return MatchRule::ExactNormalized;
  }
  if (token_subset(p.canonical, r.canonical)) return MatchRule::TokenSubset;
  if (semantic != nullptr && semantic->equivalent(p.canonical, r.canonical)) {
    return MatchRule::Semantic;
  }
  return MatchRule::NoMatch;
}

struct Pair {
  std::string label;      // canonical
  std::string raw_label;  // as supplied
  std::string value;
  itn::NormalizedValue norm;
};

std::vector<Pair> frame_pairs(const SlotFrame& frame) {
  std::vector<Pair> out;
  for (const auto& [label, values] : frame.entries) {
    const std::string canonical = canonicalize_label(label);
    for (const std::string& v : values) {
      out.push_back({canonical, label, v, itn::apply_itn(v)});
    }
  }
  return out;
}

// Kuhn's augmenting-path maximum bipartite matching; frames are tiny.
class Matching {
 public:
  Matching(size_t n_pred, size_t n_ref) : adj_(n_pred), match_ref_(n_ref, -1) {}

  void add_edge(size_t p, size_t r) { adj_[p].push_back(r); }

  std::vector<int> solve() {
    std::vector<int> match_pred(adj_.size(), -1);
    for (size_t p = 0; p < adj_.size(); ++p) {
      std::vector<bool> visited(match_ref_.size(), false);
      if (augment(p, &visited, &match_pred)) {
        // matched in augment
      }
    }
    return match_pred;
  }

 private:
  bool augment(size_t p, std::vector<bool>* visited, std::vector<int>* match_pred) {
    for (size_t r : adj_[p]) {
      if ((*visited)[r]) continue;
      (*visited)[r] = true;
      if (match_ref_[r] < 0 || augment(static_cast<size_t>(match_ref_[r]), visited, match_pred)) {
        match_ref_[r] = static_cast<int>(p);
        (*match_pred)[p] = static_cast<int>(r);
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<size_t>> adj_;
  std::vector<int> match_ref_;
};

Metrics metrics_from(size_t matched, size_t pred_pairs, size_t ref_pairs) {
  Metrics m;
  m.precision = pred_pairs == 0 ? 0.0 : static_cast<double>(matched) / pred_pairs;
  m.recall = ref_pairs == 0 ? 0.0 : static_cast<double>(matched) / ref_pairs;
  m.f1 = (m.precision + m.recall) == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

}  // namespace

const char* match_rule_name(MatchRule r) {
  switch (r) {
    case MatchRule::ExactNormalized: return "exact_normalized";
    case MatchRule::TokenSubset: return "token_subset";
    case MatchRule::TimeEquivalence: return "time_equivalence";
    case MatchRule::NumberEquivalence: return "number_equivalence";
    case MatchRule::Semantic: return "semantic";
    case MatchRule::NoMatch: return "no_match";
  }
  return "no_match";
}

LexiconSemanticMatcher::LexiconSemanticMatcher()
    : LexiconSemanticMatcher(std::map<std::string, std::string>{}) {}

LexiconSemanticMatcher::LexiconSemanticMatcher(std::map<std::string, std::string> extra) {
  lexicon_ = {{"couple", "2"},   {"a couple", "2"}, {"pair", "2"},  {"a pair", "2"},
              {"few", "3"},      {"a few", "3"},    {"dozen", "12"}, {"a dozen", "12"},
              {"single", "1"},   {"twice", "2"},    {"half dozen", "6"}};
  for (auto& [k, v] : extra) lexicon_[k] = v;
}

bool LexiconSemanticMatcher::equivalent(const std::string& canonical_a,
                                        const std::string& canonical_b) const {
  auto substitute = [this](const std::string& canon) {
    std::string s = canon;
    for (const auto& [phrase, repl] : lexicon_) {
      size_t pos;
      while ((pos = s.find(phrase)) != std::string::npos) {
        bool left_ok = pos == 0 || s[pos - 1] == ' ';
        size_t end = pos + phrase.size();
        bool right_ok = end == s.size() || s[end] == ' ';
        if (!left_ok || !right_ok) break;
        s = s.substr(0, pos) + repl + s.substr(end);
      }
    }
    return s;
  };
  const std::string a = substitute(canonical_a);
  const std::string b = substitute(canonical_b);
  if (a == canonical_a && b == canonical_b) return false;  // lexicon contributed nothing
  if (a == b && !a.empty()) return true;
  return token_subset(a, b);
}

MatchRule values_match_lenient(const std::string& pred, const std::string& ref,
                               const SemanticMatcher* semantic) {
  return classify(itn::apply_itn(pred), itn::apply_itn(ref), semantic);
}

EvalReport evaluate(const std::vector<EvalUnit>& units, const EvalOptions& options) {
  EvalReport report;
  for (const EvalUnit& unit : units) {
    const std::vector<Pair> pred = frame_pairs(unit.pred);
    const std::vector<Pair> ref = frame_pairs(unit.ref);
    report.counts.pred_pairs += pred.size();
    report.counts.ref_pairs += ref.size();

    // Lenient edges.
    std::vector<std::vector<MatchRule>> rules(pred.size(),
                                              std::vector<MatchRule>(ref.size(),
                                                                     MatchRule::NoMatch));
    Matching lenient(pred.size(), ref.size());
    for (size_t p = 0; p < pred.size(); ++p) {
      for (size_t r = 0; r < ref.size(); ++r) {
        if (pred[p].label != ref[r].label) continue;
        MatchRule rule = classify(pred[p].norm, ref[r].norm, options.semantic);
        rules[p][r] = rule;
        if (rule != MatchRule::NoMatch) lenient.add_edge(p, r);
      }
    }
    std::vector<int> lenient_match = lenient.solve();

    // Strict edges: exact raw value and exact raw label.
    Matching strict(pred.size(), ref.size());
    for (size_t p = 0; p < pred.size(); ++p) {
      for (size_t r = 0; r < ref.size(); ++r) {
        if (pred[p].raw_label == ref[r].raw_label && pred[p].value == ref[r].value) {
          strict.add_edge(p, r);
        }
      }
    }
    std::vector<int> strict_match = strict.solve();

    for (size_t p = 0; p < pred.size(); ++p) {
      if (lenient_match[p] >= 0) ++report.counts.lenient_matches;
      if (strict_match[p] >= 0) ++report.counts.strict_matches;
      if (options.explanations) {
        MatchExplanation ex;
        ex.pred = {pred[p].label, pred[p].value};
        if (lenient_match[p] >= 0) {
          const Pair& r = ref[static_cast<size_t>(lenient_match[p])];
          ex.ref = std::make_pair(r.label, r.value);
          ex.matched = true;
          ex.rule = rules[p][static_cast<size_t>(lenient_match[p])];
        }
        report.per_pair.push_back(std::move(ex));
      }
    }
  }
  report.lenient =
      metrics_from(report.counts.lenient_matches, report.counts.pred_pairs,
                   report.counts.ref_pairs);
  report.strict = metrics_from(report.counts.strict_matches, report.counts.pred_pairs,
                               report.counts.ref_pairs);
  return report;
}

std::vector<EvalUnit> align_units(const std::map<std::string, SlotFrame>& pred,
                                  const std::map<std::string, SlotFrame>& ref) {
  std::vector<std::string> missing_in_pred, missing_in_ref;
  for (const auto& [id, frame] : ref) {
    if (!pred.count(id)) missing_in_pred.push_back(id);
  }
  for (const auto& [id, frame] : pred) {
    if (!ref.count(id)) missing_in_ref.push_back(id);
  }
  if (!missing_in_pred.empty() || !missing_in_ref.empty()) {
    std::string msg = "unit ids do not align:";
    if (!missing_in_pred.empty()) {
      msg += " missing from predictions: " + join(missing_in_pred, ", ") + ";";
    }
    if (!missing_in_ref.empty()) {
      msg += " missing from references: " + join(missing_in_ref, ", ") + ";";
    }
    throw AlignmentError(msg);
  }
  std::vector<EvalUnit> units;
  for (const auto& [id, ref_frame] : ref) {
    units.push_back({id, pred.at(id), ref_frame});
  }
  return units;
}

std::map<std::string, SlotFrame> load_unit_frames(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::map<std::string, SlotFrame> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": invalid JSON record");
    }
    if (j.contains("unit_id") && j.contains("frame")) {
      SlotFrame frame;
      for (const auto& [label, jv] : j["frame"].items()) {
        if (jv.is_string()) {
          frame.entries[label].push_back(jv.get<std::string>());
        } else if (jv.is_array()) {
          for (const json& v : jv) frame.entries[label].push_back(v.get<std::string>());
        }
      }
      out[j["unit_id"].get<std::string>()] = std::move(frame);
      continue;
    }
    if (j.contains("id") && j.contains("turns")) {
      // Annotated transcript record: explode into per-turn units.
      const std::string id = j["id"].get<std::string>();
      size_t n_turns = j["turns"].is_array() ? j["turns"].size() : 0;
      json frames = j.value("frames", json::object());
      for (size_t t = 0; t < n_turns; ++t) {
        SlotFrame frame;
        auto it = frames.find(std::to_string(t));
        if (it != frames.end()) {
          for (const auto& [label, jv] : it->items()) {
            if (jv.is_string()) {
              frame.entries[label].push_back(jv.get<std::string>());
            } else if (jv.is_array()) {
              for (const json& v : jv) frame.entries[label].push_back(v.get<std::string>());
            }
          }
        }
        out[id + "#" + std::to_string(t)] = std::move(frame);
      }
      continue;
    }
    throw ValidationError(path + ":" + std::to_string(line_no) +
                          ": expected {\"unit_id\",\"frame\"} or an annotated transcript");
  }
  return out;
}

std::string report_to_text(const EvalReport& r) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "pairs: pred=%zu ref=%zu | matches: strict=%zu lenient=%zu\n",
                r.counts.pred_pairs, r.counts.ref_pairs, r.counts.strict_matches,
                r.counts.lenient_matches);
  os << buf;
  std::snprintf(buf, sizeof(buf), "strict : P=%.4f R=%.4f F1=%.4f\n", r.strict.precision,
                r.strict.recall, r.strict.f1);
  os << buf;
  std::snprintf(buf, sizeof(buf), "lenient: P=%.4f R=%.4f F1=%.4f\n", r.lenient.precision,
                r.lenient.recall, r.lenient.f1);
  os << buf;
  return os.str();
}

std::string report_to_json(const EvalReport& r, bool include_pairs) {
  json j = {
      {"counts",
       {{"pred_pairs", r.counts.pred_pairs},
        {"ref_pairs", r.counts.ref_pairs},
        {"lenient_matches", r.counts.lenient_matches},
        {"strict_matches", r.counts.strict_matches}}},
      {"strict",
       {{"precision", r.strict.precision}, {"recall", r.strict.recall}, {"f1", r.strict.f1}}},
      {"lenient",
       {{"precision", r.lenient.precision},
        {"recall", r.lenient.recall},
        {"f1", r.lenient.f1}}},
  };
  if (include_pairs) {
    json pairs = json::array();
    for (const MatchExplanation& ex : r.per_pair) {
      json je = {{"pred", {{"label", ex.pred.first}, {"value", ex.pred.second}}},
                 {"matched", ex.matched},
                 {"rule", match_rule_name(ex.rule)}};
      if (ex.ref) je["ref"] = {{"label", ex.ref->first}, {"value", ex.ref->second}};
      pairs.push_back(je);
    }
    j["per_pair"] = pairs;
  }
  return j.dump(2);
}

}  // namespace slotfill::eval
