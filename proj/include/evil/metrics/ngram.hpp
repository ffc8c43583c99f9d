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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace evil::metrics {

using TokenSeq = std::vector<std::string>;

// Lower-cases ASCII, splits on whitespace and emits every ASCII punctuation
// character as its own token. Expects bin tokens to be stripped already.
TokenSeq tokenize(std::string_view text);

// Whitespace split only, for text that is already tokenized.
TokenSeq split_tokens(std::string_view pretokenized);

inline constexpr int kMaxOrder = 4;

// N-grams are keyed by their tokens joined with single spaces; tokens never
// contain whitespace, so keys of different orders cannot collide.
using NgramCounts = std::unordered_map<std::string, int>;

struct NgramProfile {
  std::array<NgramCounts, kMaxOrder> counts;  // counts[n - 1] holds n-grams
  std::size_t length = 0;

  static NgramProfile of(const TokenSeq& tokens);
};

// Number of reference sets containing each n-gram, over a fixed corpus.
class DocFreqTable {
 public:
  DocFreqTable() = default;

  // One entry per corpus item: that item's references.
  static DocFreqTable build(std::span<const std::vector<NgramProfile>> reference_sets);

  int df(const std::string& ngram) const noexcept;
  std::size_t corpus_size() const noexcept { return corpus_size_; }
  std::size_t distinct_ngrams() const noexcept { return df_.size(); }

 private:
  std::unordered_map<std::string, int> df_;
  std::size_t corpus_size_ = 0;
};

struct CandidateRefs {
  TokenSeq candidate;
  std::vector<TokenSeq> references;
};

}  // namespace evil::metrics
