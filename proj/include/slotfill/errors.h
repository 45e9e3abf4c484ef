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

#ifndef SLOTFILL_ERRORS_H_
#define SLOTFILL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace slotfill {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad caller input: empty labels, mismatched ids, out-of-order turns.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Unreadable or unwritable files.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed config: unknown constraint pattern ids, bad ranges.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Transport or protocol failure talking to a generation/extraction backend.
class BackendError : public Error {
 public:
  using Error::Error;
};

// Registering a label whose canonical form already exists with another kind.
class RegistryConflictError : public Error {
 public:
  using Error::Error;
};

// Model response that survives no rung of the repair ladder. Carries the
// raw text so callers can audit what the backend actually said.
class UnparseableResponseError : public Error {
 public:
  explicit UnparseableResponseError(const std::string& raw)
      : Error("unparseable model response: " + raw), raw_(raw) {}
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

// Teacher response with no line matching any transcript turn.
class AnnotationParseError : public Error {
 public:
  using Error::Error;
};

// Evaluation inputs whose unit ids do not line up.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

}  // namespace slotfill

#endif  // SLOTFILL_ERRORS_H_
