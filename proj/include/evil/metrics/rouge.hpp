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
#include <span>

#include "evil/metrics/ngram.hpp"

namespace evil::metrics {

inline constexpr double kRougeBeta = 1.2;

// How scores against several references are combined.
//   kBestPrecisionRecall: F of the best precision and the best recall taken
//     separately over the references, as the common caption-evaluation
//     scorer does.
//   kMaxF: F per reference, then the maximum.
// The two agree whenever there is a single reference.
enum class RougeAggregation { kBestPrecisionRecall, kMaxF };

std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b);

double rouge_l(const TokenSeq& candidate, std::span<const TokenSeq> references,
               RougeAggregation aggregation = RougeAggregation::kBestPrecisionRecall,
               double beta = kRougeBeta);

}  // namespace evil::metrics
