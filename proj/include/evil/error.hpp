// Copyright 2026 The evil-toolkit Authors.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace evil {

// Root of every error the toolkit raises. The CLI maps LoadError to exit
// code 2 and every other Error to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file or directory could not be opened or read.
class LoadError : public Error {
 public:
  explicit LoadError(const std::string& what) : Error(what) {}
};

// A record could not be decoded. `record_index` is zero-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t record_index, const std::string& what)
      : Error("record " + std::to_string(record_index) + ": " + what),
        record_index_(record_index) {}

  std::size_t record_index() const noexcept { return record_index_; }

 private:
  std::size_t record_index_;
};

// Decoded data violates a domain invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// A caller broke an operation's precondition.
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error(what) {}
};

// A numeric argument fell outside its admissible interval.
class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what) : Error(what) {}
};

// Predictions that could not be matched to gold samples.
class JoinError : public Error {
 public:
  explicit JoinError(std::vector<std::string> ids)
      : Error(describe(ids)), ids_(std::move(ids)) {}

  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  static std::string describe(const std::vector<std::string>& ids) {
    std::string msg = "unmatched prediction ids:";
    for (const auto& id : ids) msg += " " + id;
    return msg;
  }

  std::vector<std::string> ids_;
};

}  // namespace evil
