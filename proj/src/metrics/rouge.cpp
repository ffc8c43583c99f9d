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

#include <algorithm>
#include <vector>

#include "evil/metrics/rouge.hpp"

namespace evil::metrics {

std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (const auto& x : a) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = x == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

namespace {

double f_measure(double p, double r, double beta) {
  if (p <= 0 || r <= 0) return 0.0;
  const double b2 = beta * beta;
  return (1 + b2) * p * r / (r + b2 * p);
}

}  // namespace

double rouge_l(const TokenSeq& candidate, std::span<const TokenSeq> references,
               RougeAggregation aggregation, double beta) {
  if (candidate.empty()) return 0.0;
  double best_p = 0, best_r = 0, best_f = 0;
  for (const auto& ref : references) {
    if (ref.empty()) continue;
    const auto lcs = static_cast<double>(lcs_length(candidate, ref));
    const double p = lcs / static_cast<double>(candidate.size());
    const double r = lcs / static_cast<double>(ref.size());
    best_p = std::max(best_p, p);
    best_r = std::max(best_r, r);
    best_f = std::max(best_f, f_measure(p, r, beta));
  }
  return aggregation == RougeAggregation::kMaxF ? best_f : f_measure(best_p, best_r, beta);
}

}  // namespace evil::metrics
