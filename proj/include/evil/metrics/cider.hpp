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

#include <span>
#include <vector>

#include "evil/metrics/ngram.hpp"

namespace evil::metrics {

inline constexpr double kCiderSigma = 6.0;

// CIDEr-D against a fixed document-frequency table. Immutable after
// construction and safe to share between threads.
class CiderD {
 public:
  explicit CiderD(DocFreqTable df, double sigma = kCiderSigma);

  // Builds the table from the references of `pairs`.
  static CiderD for_corpus(std::span<const CandidateRefs> pairs, double sigma = kCiderSigma);

  double score(const NgramProfile& candidate, std::span<const NgramProfile> references) const;
  double score(const TokenSeq& candidate, std::span<const TokenSeq> references) const;

  const DocFreqTable& doc_freq() const noexcept { return df_; }

 private:
  DocFreqTable df_;
  double sigma_;
};

struct CiderResult {
  std::vector<double> per_sample;
  double mean = 0;
};

// Throws ContractError on an empty corpus.
CiderResult cider_d(std::span<const CandidateRefs> pairs, double sigma = kCiderSigma);

}  // namespace evil::metrics
