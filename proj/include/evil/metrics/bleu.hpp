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
#include <span>

#include "evil/metrics/ngram.hpp"

namespace evil::metrics {

// Sufficient statistics for corpus BLEU. Statistics of several samples are
// summed before the precisions are formed.
struct BleuStats {
  double candidate_length = 0;
  double reference_length = 0;  // closest reference length, shorter on ties
  std::array<double, kMaxOrder> matches{};  // clipped n-gram matches
  std::array<double, kMaxOrder> guesses{};  // candidate n-grams

  BleuStats& operator+=(const BleuStats& other) noexcept;

  // Weights the clipped matches by `weight`, leaving lengths and guess
  // counts alone. Used for task-score scaling.
  BleuStats with_weighted_matches(double weight) const noexcept;
};

BleuStats bleu_stats(const TokenSeq& candidate, std::span<const TokenSeq> references);

// [B1, B2, B3, B4] from summed statistics. A zero precision at any order
// zeroes that order and every higher one.
std::array<double, kMaxOrder> bleu_from_stats(const BleuStats& stats) noexcept;

// Throws ContractError on an empty corpus.
std::array<double, kMaxOrder> bleu_corpus(std::span<const CandidateRefs> pairs);

}  // namespace evil::metrics
