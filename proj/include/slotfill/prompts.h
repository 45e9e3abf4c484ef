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
// The two prompt templates shared by the teacher loop, the dataset
// generator and the serving pipeline, plus the inverse helpers test
// backends use to read a prompt back.

#ifndef SLOTFILL_PROMPTS_H_
#define SLOTFILL_PROMPTS_H_

#include <optional>
#include <string>
#include <vector>

#include "slotfill/model.h"

namespace slotfill::prompts {

inline constexpr const char* kAgentPrefix = "Agent says: ";
inline constexpr const char* kCustomerPrefix = "Customer says: ";

std::string turn_line(const Turn& turn);

// Turns [begin, end) rendered one per line in index order.
std::string dialogue_block(const std::vector<Turn>& turns, size_t begin, size_t end);

// The teacher annotation prompt; {labels} is a comma-joined list, {text}
// the dialogue block.
std::string annotation_prompt(const std::vector<std::string>& labels,
                              const std::vector<Turn>& turns);

// The instruction-tuning template up to and including [/INST] (the serving
// form). labels_csv carries target and distractor labels already joined.
std::string extraction_prompt(const std::string& labels_csv, const std::string& context_text,
                              const std::string& main_text);

// Full training sample: extraction prompt plus the completion.
std::string training_prompt(const std::string& labels_csv, const std::string& context_text,
                            const std::string& main_text, const std::string& completion_json);

// Everything between [INST] and [/INST].
std::string instruction_of(const std::string& rendered);

// Prompt introspection, used by the replay/oracle/mock backends.
std::optional<std::vector<std::string>> labels_in_prompt(const std::string& prompt);
std::vector<std::string> main_text_lines(const std::string& prompt);
std::string strip_role_prefix(const std::string& line);

}  // namespace slotfill::prompts

#endif  // SLOTFILL_PROMPTS_H_
