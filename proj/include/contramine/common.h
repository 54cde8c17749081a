// Copyright 2026 The Contramine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CONTRAMINE_COMMON_H_
#define CONTRAMINE_COMMON_H_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace contramine {

// Error hierarchy. The CLI maps each family onto an exit code:
// ParseError/ValidationError/ConfigError -> 2, TransportError/ProtocolError
// -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files (bad JSON, wrong vector dimension, ...).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Invalid parameters or configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Numerical failure during training.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Remote scorer unreachable or timing out.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int attempts)
      : Error(what), attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

// Remote scorer answered with something that is not the wire protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Text helpers shared by every module.

// ASCII lowercase; bytes >= 0x80 are left untouched so UTF-8 survives.
std::string to_lower(std::string_view s);

std::string trim(std::string_view s);

// Trims and collapses every run of whitespace into one space.
std::string normalize_whitespace(std::string_view s);

// Lowercases and splits on non-alphanumeric ASCII bytes. Bytes >= 0x80 are
// treated as word characters so non-ASCII words stay whole.
std::vector<std::string> tokenize(std::string_view text);

bool contains_ci(std::string_view haystack_lower, std::string_view needle_lower);

// ---------------------------------------------------------------------------
// I/O helpers.

// Reads a whole file; throws ParseError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

// Writes via a sibling temp file followed by rename, so readers never observe
// a partially written output.
void write_file_atomic(const std::filesystem::path& path, std::string_view data);

// Non-empty, non-comment lines of a plain-text list file ('#' starts a
// comment). Entries are trimmed.
std::vector<std::string> read_list_file(const std::filesystem::path& path);

// Derives an independent child seed (splitmix64 finaliser over seed ^ salt).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace contramine

#endif  // CONTRAMINE_COMMON_H_
