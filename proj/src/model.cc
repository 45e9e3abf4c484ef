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

#include "slotfill/model.h"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "slotfill/errors.h"
#include "slotfill/itn.h"
#include "slotfill/label.h"
#include "slotfill/text_norm.h"

namespace slotfill {

using nlohmann::json;

const char* speaker_name(Speaker s) {
  return s == Speaker::Agent ? "agent" : "customer";
}

std::optional<Speaker> speaker_from_name(std::string_view name) {
  if (name == "agent") return Speaker::Agent;
  if (name == "customer") return Speaker::Customer;
  return std::nullopt;
}

const char* annotation_source_name(AnnotationSource s) {
  switch (s) {
    case AnnotationSource::Teacher: return "teacher";
    case AnnotationSource::Human: return "human";
    case AnnotationSource::Merged: return "merged";
  }
  return "teacher";
}

std::optional<AnnotationSource> annotation_source_from_name(std::string_view name) {
  if (name == "teacher") return AnnotationSource::Teacher;
  if (name == "human") return AnnotationSource::Human;
  if (name == "merged") return AnnotationSource::Merged;
  return std::nullopt;
}

size_t SlotFrame::value_count() const {
  size_t n = 0;
  for (const auto& [label, values] : entries) n += values.size();
  return n;
}

void SlotFrame::add(const std::string& label, const std::string& value) {
  entries[label].push_back(value);
}

namespace {

json turns_to_json(const std::vector<Turn>& turns) {
  json arr = json::array();
  for (const Turn& t : turns) {
    arr.push_back({{"speaker", speaker_name(t.speaker)}, {"text", t.text}});
  }
  return arr;
}

std::vector<Turn> turns_from_json(const json& arr) {
  if (!arr.is_array()) throw ValidationError("\"turns\" is not an array");
  std::vector<Turn> turns;
  int index = 0;
  for (const json& jt : arr) {
    if (!jt.is_object()) throw ValidationError("turn is not an object");
    auto sp = speaker_from_name(jt.value("speaker", ""));
    if (!sp) throw ValidationError("turn " + std::to_string(index) + ": unknown speaker");
    std::string text = jt.value("text", "");
    if (trim(text).empty()) {
      throw ValidationError("turn " + std::to_string(index) + ": empty text");
    }
    turns.push_back({index, *sp, text});
    ++index;
  }
  return turns;
}

Transcript transcript_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("record is not an object");
  Transcript t;
  if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty()) {
    throw ValidationError("missing or invalid \"id\"");
  }
  t.id = j["id"].get<std::string>();
  t.domain = j.value("domain", "");
  if (!j.contains("turns")) throw ValidationError("missing \"turns\"");
  t.turns = turns_from_json(j["turns"]);
  return t;
}

json frame_to_json(const SlotFrame& frame) {
  json obj = json::object();
  for (const auto& [label, values] : frame.entries) obj[label] = values;
  return obj;
}

SlotFrame frame_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("frame is not an object");
  SlotFrame frame;
  for (const auto& [label, jv] : j.items()) {
    std::vector<std::string> values;
    if (jv.is_string()) {
      values.push_back(jv.get<std::string>());
    } else if (jv.is_array()) {
      for (const json& v : jv) {
        if (!v.is_string()) throw ValidationError("frame value is not a string");
        values.push_back(v.get<std::string>());
      }
    } else {
      throw ValidationError("frame entry is neither string nor array");
    }
    if (values.empty()) throw ValidationError("label \"" + label + "\" has no values");
    for (const std::string& v : values) {
      std::string folded = to_lower_ascii(trim(v));
      if (folded.empty() || folded == "na") {
        throw ValidationError("label \"" + label + "\" carries an NA/empty value");
      }
    }
    frame.entries[label] = values;
  }
  return frame;
}

AnnotatedTranscript annotated_from_json(const json& j) {
  AnnotatedTranscript doc;
  doc.transcript = transcript_from_json(j);
  auto src = annotation_source_from_name(j.value("source", ""));
  if (!src) throw ValidationError("missing or unknown \"source\"");
  doc.source = *src;
  if (j.contains("frames")) {
    if (!j["frames"].is_object()) throw ValidationError("\"frames\" is not an object");
    for (const auto& [key, jframe] : j["frames"].items()) {
      int idx = -1;
      try {
        idx = std::stoi(key);
      } catch (const std::exception&) {
        throw ValidationError("frame key \"" + key + "\" is not a turn index");
      }
      if (idx < 0 || idx >= static_cast<int>(doc.transcript.turns.size())) {
        throw ValidationError("frame key " + key + " is outside the transcript");
      }
      SlotFrame frame = frame_from_json(jframe);
      if (frame.empty()) {
        throw ValidationError("turn " + key + " has an empty frame; omit it instead");
      }
      doc.frames[idx] = std::move(frame);
    }
  }
  return doc;
}

template <typename T, typename ParseFn>
LoadResult<T> load_lines(const std::string& path, ParseFn parse) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  LoadResult<T> result;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      json j = json::parse(line);
      result.items.push_back(parse(j));
    } catch (const json::exception& e) {
      result.diagnostics.push_back({line_no, std::string("invalid JSON: ") + e.what()});
    } catch (const ValidationError& e) {
      result.diagnostics.push_back({line_no, e.what()});
    }
  }
  return result;
}

// Dedup key for merged values: ITN-normalized, case-folded, punctuation-free.
std::string dedup_key(const std::string& value) {
  return itn::apply_itn(value).canonical;
}

}  // namespace

LoadResult<Transcript> load_transcripts(const std::string& path) {
  return load_lines<Transcript>(path, [](const json& j) { return transcript_from_json(j); });
}

LoadResult<AnnotatedTranscript> load_annotated(const std::string& path) {
  return load_lines<AnnotatedTranscript>(path,
                                         [](const json& j) { return annotated_from_json(j); });
}

std::string transcript_to_json_line(const Transcript& t) {
  json j = {{"id", t.id}, {"domain", t.domain}, {"turns", turns_to_json(t.turns)}};
  return j.dump();
}

std::string annotated_to_json_line(const AnnotatedTranscript& doc) {
  json j = {{"id", doc.transcript.id},
            {"domain", doc.transcript.domain},
            {"turns", turns_to_json(doc.transcript.turns)},
            {"source", annotation_source_name(doc.source)}};
  json frames = json::object();
  for (const auto& [idx, frame] : doc.frames) {
    frames[std::to_string(idx)] = frame_to_json(frame);
  }
  j["frames"] = frames;
  return j.dump();
}

void save_transcripts(const std::vector<Transcript>& ts, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const Transcript& t : ts) out << transcript_to_json_line(t) << "\n";
}

void save_annotated(const std::vector<AnnotatedTranscript>& docs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const AnnotatedTranscript& d : docs) out << annotated_to_json_line(d) << "\n";
}

SlotFrame merge_frames(const SlotFrame& a, const SlotFrame& b) {
  SlotFrame merged;
  auto absorb = [&merged](const SlotFrame& src) {
    for (const auto& [raw_label, values] : src.entries) {
      const std::string label = canonicalize_label(raw_label);
      auto& dst = merged.entries[label];
      std::set<std::string> seen;
      for (const std::string& existing : dst) seen.insert(dedup_key(existing));
      for (const std::string& v : values) {
        if (seen.insert(dedup_key(v)).second) dst.push_back(v);
      }
    }
  };
  absorb(a);
  absorb(b);
  return merged;
}

AnnotatedTranscript merge_annotations(const AnnotatedTranscript& teacher,
                                      const AnnotatedTranscript& human) {
  if (teacher.transcript.id != human.transcript.id) {
    throw ValidationError("merge_annotations: transcript ids differ (\"" +
                          teacher.transcript.id + "\" vs \"" + human.transcript.id + "\")");
  }
  AnnotatedTranscript merged;
  merged.transcript = teacher.transcript;
  merged.source = AnnotationSource::Merged;
  std::set<int> indices;
  for (const auto& [idx, frame] : teacher.frames) indices.insert(idx);
  for (const auto& [idx, frame] : human.frames) indices.insert(idx);
  static const SlotFrame kEmpty;
  for (int idx : indices) {
    auto ti = teacher.frames.find(idx);
    auto hi = human.frames.find(idx);
    SlotFrame m = merge_frames(ti != teacher.frames.end() ? ti->second : kEmpty,
                               hi != human.frames.end() ? hi->second : kEmpty);
    if (!m.empty()) merged.frames[idx] = std::move(m);
  }
  return merged;
}

}  // namespace slotfill
