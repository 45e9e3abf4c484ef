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

#include "slotfill/prompts.h"

#include "slotfill/text_norm.h"

namespace slotfill::prompts {

namespace {

const char kAnnotationTemplateHead[] =
    "You are an expert in Natural Language Processing.\n"
    "\n"
    "Your task is to identify all named slot values in the given dialogue text, "
    "in which agent turn starts with \"Agent says:\" and customer turn starts with "
    "\"Customer says:\".\n"
    "\n"
    "Return the output in a json format for every line in the dialogue where key is "
    "text and value is dict of slot types and values. If there are no slot types in "
    "the line, return NA.\n"
    "\n"
    "To get started, here is the list of slot types available to you: ";

const char kAnnotationTemplateMid[] =
    ".\n"
    "\n"
    "Do not be restricted by this list. You should also extract slot types that are "
    "not in this list but present in the text.\n"
    "\n"
    "Dialogue Text: ";

const char kExtractionHead[] =
    "<s>[INST]<<SYS>>\n"
    "You are an honest and helpful information extractor.\n"
    "<</SYS>> \n"
    "Your task is to extract values for the following slot labels in the Main Text "
    "delimited by triple backticks: ";

const char kExtractionMid[] =
    ". Format your response as a JSON object with slot labels as the keys and slot "
    "values in a list. Only return the slots found the Main text. Use the following "
    "dialogue only as context support to extract slots from the Main text delimited "
    "by triple backticks:\n";

const char kLabelsEndMarker[] = ". Format your response as a JSON object";

}  // namespace

std::string turn_line(const Turn& turn) {
  return std::string(turn.speaker == Speaker::Agent ? kAgentPrefix : kCustomerPrefix) +
         turn.text;
}

std::string dialogue_block(const std::vector<Turn>& turns, size_t begin, size_t end) {
  std::string out;
  for (size_t i = begin; i < end && i < turns.size(); ++i) {
    if (!out.empty()) out.push_back('\n');
    out += turn_line(turns[i]);
  }
  return out;
}

std::string annotation_prompt(const std::vector<std::string>& labels,
                              const std::vector<Turn>& turns) {
  std::string out = kAnnotationTemplateHead;
  out += join(labels, ", ");
  out += kAnnotationTemplateMid;
  out += dialogue_block(turns, 0, turns.size());
  out.push_back('\n');
  return out;
}

std::string extraction_prompt(const std::string& labels_csv, const std::string& context_text,
                              const std::string& main_text) {
  std::string out = kExtractionHead;
  out += labels_csv;
  out += kExtractionMid;
  out += context_text;
  out += "\n```\nMain text: ";
  out += main_text;
  out += "\n```\n[/INST]";
  return out;
}

std::string training_prompt(const std::string& labels_csv, const std::string& context_text,
                            const std::string& main_text, const std::string& completion_json) {
  return extraction_prompt(labels_csv, context_text, main_text) + " " + completion_json;
}

std::string instruction_of(const std::string& rendered) {
  const std::string open = "[INST]";
  const std::string close = "[/INST]";
  size_t b = rendered.find(open);
  size_t e = rendered.rfind(close);
  if (b == std::string::npos || e == std::string::npos || e <= b) return rendered;
  b += open.size();
  return rendered.substr(b, e - b);
}

std::optional<std::vector<std::string>> labels_in_prompt(const std::string& prompt) {
  const std::string marker = "triple backticks: ";
  size_t b = prompt.find(marker);
  if (b == std::string::npos) return std::nullopt;
  b += marker.size();
  size_t e = prompt.find(kLabelsEndMarker, b);
  if (e == std::string::npos) return std::nullopt;
  std::vector<std::string> labels;
  std::string list = prompt.substr(b, e - b);
  size_t pos = 0;
  while (pos <= list.size()) {
    size_t comma = list.find(", ", pos);
    std::string piece =
        comma == std::string::npos ? list.substr(pos) : list.substr(pos, comma - pos);
    piece = trim(piece);
    if (!piece.empty()) labels.push_back(piece);
    if (comma == std::string::npos) break;
    pos = comma + 2;
  }
  return labels;
}

std::vector<std::string> main_text_lines(const std::string& prompt) {
  const std::string marker = "```\nMain text: ";
  size_t b = prompt.find(marker);
  if (b == std::string::npos) return {};
  b += marker.size();
  size_t e = prompt.find("\n```", b);
  if (e == std::string::npos) return {};
  std::vector<std::string> lines;
  std::string block = prompt.substr(b, e - b);
  size_t pos = 0;
  while (pos <= block.size()) {
    size_t nl = block.find('\n', pos);
    std::string line = nl == std::string::npos ? block.substr(pos) : block.substr(pos, nl - pos);
    if (!trim(line).empty()) lines.push_back(line);
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  return lines;
}

std::string strip_role_prefix(const std::string& line) {
  if (line.rfind(kAgentPrefix, 0) == 0) return line.substr(std::string(kAgentPrefix).size());
  if (line.rfind(kCustomerPrefix, 0) == 0)
    return line.substr(std::string(kCustomerPrefix).size());
  return line;
}

}  // namespace slotfill::prompts
