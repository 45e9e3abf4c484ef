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
// Shared domain types: dialogue transcripts, per-turn slot frames, and the
// line-delimited file formats that carry them. All types are immutable by
// convention after construction and safe to share across threads.

#ifndef SLOTFILL_MODEL_H_
#define SLOTFILL_MODEL_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace slotfill {

enum class Speaker { Agent, Customer };

const char* speaker_name(Speaker s);                       // "agent" / "customer"
std::optional<Speaker> speaker_from_name(std::string_view);

struct Turn {
  int index = 0;  // 0-based, contiguous within a transcript
  Speaker speaker = Speaker::Agent;
  std::string text;  // non-empty after trimming

  bool operator==(const Turn&) const = default;
};

struct Transcript {
  std::string id;
  std::string domain;  // free-form tag, e.g. "telecom"
  std::vector<Turn> turns;

  bool operator==(const Transcript&) const = default;
};

// Map from slot label to extracted values. No label maps to an empty list;
// no value is "NA" or empty. Labels are kept in sorted order so iteration
// and serialization are deterministic.
struct SlotFrame {
  std::map<std::string, std::vector<std::string>> entries;

  bool empty() const { return entries.empty(); }
  size_t value_count() const;
  void add(const std::string& label, const std::string& value);
  bool operator==(const SlotFrame&) const = default;
};

enum class AnnotationSource { Teacher, Human, Merged };

const char* annotation_source_name(AnnotationSource s);
std::optional<AnnotationSource> annotation_source_from_name(std::string_view);

struct AnnotatedTranscript {
  Transcript transcript;
  // Keyed by turn index. A turn with no slots has no entry, never an empty
  // frame ("return NA" maps to absence).
  std::map<int, SlotFrame> frames;
  AnnotationSource source = AnnotationSource::Teacher;

  bool operator==(const AnnotatedTranscript&) const = default;
};

struct LineDiagnostic {
  size_t line = 0;  // 1-based line number in the source file
  std::string message;
};

template <typename T>
struct LoadResult {
  std::vector<T> items;
  std::vector<LineDiagnostic> diagnostics;
};

// One JSON record per line:
//   {"id": ..., "domain": ..., "turns": [{"speaker": "agent"|"customer", "text": ...}, ...]}
// Annotated records add "frames": {"<turn_index>": {"<label>": [values...]}}
// and "source": "teacher"|"human" ("merged" for union documents).
// Malformed lines become diagnostics and are skipped; an unreadable file
// throws IoError.
LoadResult<Transcript> load_transcripts(const std::string& path);
LoadResult<AnnotatedTranscript> load_annotated(const std::string& path);

void save_transcripts(const std::vector<Transcript>&, const std::string& path);
void save_annotated(const std::vector<AnnotatedTranscript>&, const std::string& path);

std::string transcript_to_json_line(const Transcript&);
std::string annotated_to_json_line(const AnnotatedTranscript&);

// Union of two annotation passes over the same transcript id. Labels are
// canonicalized; when both sides carry the same label the value lists are
// concatenated and deduplicated on the ITN-normalized form, keeping the
// first-seen surface. Throws ValidationError on id mismatch.
AnnotatedTranscript merge_annotations(const AnnotatedTranscript& teacher,
                                      const AnnotatedTranscript& human);

// Same dedup rule applied to two frames; used by merge and by the dataset
// generator when a text window spans several annotated turns.
SlotFrame merge_frames(const SlotFrame& a, const SlotFrame& b);

}  // namespace slotfill

#endif  // SLOTFILL_MODEL_H_
