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

#include "slotfill/json_repair.h"

#include <vector>

#include "slotfill/text_norm.h"

namespace slotfill::repair {

using nlohmann::json;

namespace {

std::optional<json> parse_non_throwing(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return std::nullopt;
  return j;
}

// Merge an array of objects key-wise; annotation-style responses emit one
// object per dialogue line.
std::optional<json> objectify(const json& j) {
  if (j.is_object()) return j;
  if (j.is_array()) {
    json merged = json::object();
    bool any = false;
    for (const json& el : j) {
      if (!el.is_object()) continue;
      any = true;
      for (const auto& [k, v] : el.items()) merged[k] = v;
    }
    if (any) return merged;
  }
  return std::nullopt;
}

bool word_boundary(const std::string& s, size_t begin, size_t end) {
  auto alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  if (begin > 0 && alnum(s[begin - 1])) return false;
  if (end < s.size() && alnum(s[end])) return false;
  return true;
}

}  // namespace

std::optional<json> strict_object(const std::string& text) {
  auto j = parse_non_throwing(text);
  if (!j) return std::nullopt;
  return objectify(*j);
}

std::string longest_balanced_object(const std::string& text) {
  std::string best;
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '{') {
      ++i;
      continue;
    }
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    size_t j = i;
    size_t close = std::string::npos;
    for (; j < text.size(); ++j) {
      char c = text[j];
      if (in_string) {
        if (escaped) escaped = false;
        else if (c == '\\') escaped = true;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') in_string = true;
      else if (c == '{') ++depth;
      else if (c == '}') {
        --depth;
        if (depth == 0) {
          close = j;
          break;
        }
      }
    }
    if (close != std::string::npos) {
      size_t len = close - i + 1;
      if (len > best.size()) best = text.substr(i, len);
      i = close + 1;
    } else {
      ++i;
    }
  }
  return best;
}

std::string relax_json(const std::string& text) {
  std::string s = text;
  // Drop markdown code fences.
  for (const char* fence : {"```json", "```JSON", "```"}) {
    size_t pos;
    while ((pos = s.find(fence)) != std::string::npos) {
      s.erase(pos, std::string(fence).size());
    }
  }
  // Single quotes to double quotes outside existing double-quoted strings.
  std::string out;
  out.reserve(s.size());
  bool in_dquote = false;
  bool escaped = false;
  for (char c : s) {
    if (in_dquote) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_dquote = false;
      out.push_back(c);
      continue;
    }
    if (c == '"') {
      in_dquote = true;
      out.push_back(c);
    } else if (c == '\'') {
      out.push_back('"');
    } else {
      out.push_back(c);
    }
  }
  s = std::move(out);
  // Python literals.
  struct Sub {
    const char* from;
    const char* to;
  };
  for (const Sub& sub : {Sub{"None", "null"}, Sub{"True", "true"}, Sub{"False", "false"}}) {
    size_t pos = 0;
    const std::string from = sub.from;
    while ((pos = s.find(from, pos)) != std::string::npos) {
      if (word_boundary(s, pos, pos + from.size())) {
        s.replace(pos, from.size(), sub.to);
        pos += std::string(sub.to).size();
      } else {
        pos += from.size();
      }
    }
  }
  // Trailing commas before } or ].
  out.clear();
  out.reserve(s.size());
  in_dquote = false;
  escaped = false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (in_dquote) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_dquote = false;
      out.push_back(c);
      continue;
    }
    if (c == '"') {
      in_dquote = true;
      out.push_back(c);
      continue;
    }
    if (c == ',') {
      size_t k = i + 1;
      while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
      if (k < s.size() && (s[k] == '}' || s[k] == ']')) continue;  // drop the comma
    }
    out.push_back(c);
  }
  return out;
}

std::optional<json> salvage_lines(const std::string& text) {
  json obj = json::object();
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string line =
        nl == std::string::npos ? text.substr(pos) : text.substr(pos, nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;

    std::string t = trim(line);
    if (t.empty() || t[0] == '{' || t[0] == '}' || t[0] == '[' || t[0] == ']') continue;
    // Split on the first ':' that is outside quotes.
    size_t colon = std::string::npos;
    bool in_q = false;
    for (size_t i = 0; i < t.size(); ++i) {
      if (t[i] == '"') in_q = !in_q;
      else if (t[i] == ':' && !in_q) {
        colon = i;
        break;
      }
    }
    if (colon == std::string::npos || colon == 0 || colon + 1 >= t.size()) continue;
    auto unquote = [](std::string v) {
      v = trim(v);
      while (!v.empty() && (v.back() == ',' || v.back() == ';')) v = trim(v.substr(0, v.size() - 1));
      if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
      return v;
    };
    std::string key = unquote(t.substr(0, colon));
    std::string val = trim(t.substr(colon + 1));
    if (key.empty() || val.empty()) continue;
    if (val.front() == '[') {
      auto arr = parse_non_throwing(relax_json(val));
      if (arr && arr->is_array()) {
        obj[key] = *arr;
        continue;
      }
      // "[a, b]" with bare words
      std::string inner = val.substr(1, val.find_last_of(']') == std::string::npos
                                            ? std::string::npos
                                            : val.find_last_of(']') - 1);
      json list = json::array();
      size_t p = 0;
      while (p <= inner.size()) {
        size_t comma = inner.find(',', p);
        std::string piece = comma == std::string::npos ? inner.substr(p)
                                                       : inner.substr(p, comma - p);
        piece = unquote(piece);
        if (!piece.empty()) list.push_back(piece);
        if (comma == std::string::npos) break;
        p = comma + 1;
      }
      if (!list.empty()) obj[key] = list;
      continue;
    }
    obj[key] = unquote(val);
  }
  if (obj.empty()) return std::nullopt;
  return obj;
}

std::optional<json> parse_object_with_repair(const std::string& raw) {
  if (auto j = strict_object(raw)) return j;

  const std::string balanced = longest_balanced_object(raw);
  if (!balanced.empty()) {
    if (auto j = strict_object(balanced)) return j;
  }

  const std::string relaxed = relax_json(raw);
  if (auto j = strict_object(relaxed)) return j;
  const std::string balanced_relaxed = longest_balanced_object(relaxed);
  if (!balanced_relaxed.empty()) {
    if (auto j = strict_object(balanced_relaxed)) return j;
  }
  if (!balanced.empty()) {
    if (auto j = strict_object(relax_json(balanced))) return j;
  }

  return salvage_lines(raw);
}

}  // namespace slotfill::repair
