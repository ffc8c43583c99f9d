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
#include <cmath>
#include <cstdlib>

#include "evil/error.hpp"
#include "evil/metrics/bleu.hpp"

namespace evil::metrics {

BleuStats& BleuStats::operator+=(const BleuStats& other) noexcept {
  candidate_length += other.candidate_length;
  reference_length += other.reference_length;
  for (int k = 0; k < kMaxOrder; ++k) {
    matches[k] += other.matches[k];
    guesses[k] += other.guesses[k];
  }
  return *this;
}

BleuStats BleuStats::with_weighted_matches(double weight) const noexcept {
  BleuStats out = *this;
  for (auto& m : out.matches) m *= weight;
  return out;
}

BleuStats bleu_stats(const TokenSeq& candidate, std::span<const TokenSeq> references) {
  BleuStats s;
  const auto cand = NgramProfile::of(candidate);
  const auto c = static_cast<long>(candidate.size());
  s.candidate_length = static_cast<double>(c);

  std::array<NgramCounts, kMaxOrder> max_ref;
  long best_len = -1;
  for (const auto& ref : references) {
    const auto r = static_cast<long>(ref.size());
    if (best_len < 0 || std::labs(r - c) < std::labs(best_len - c) ||
        (std::labs(r - c) == std::labs(best_len - c) && r < best_len)) {
      best_len = r;
    }
    const auto prof = NgramProfile::of(ref);
    for (int k = 0; k < kMaxOrder; ++k) {
      for (const auto& [g, n] : prof.counts[k]) {
        auto& slot = max_ref[k][g];
        slot = std::max(slot, n);
      }
    }
  }
  s.reference_length = best_len < 0 ? 0.0 : static_cast<double>(best_len);

  for (int k = 0; k < kMaxOrder; ++k) {
    s.guesses[k] = static_cast<double>(std::max(0L, c - k));
    double m = 0;
    for (const auto& [g, n] : cand.counts[k]) {
      auto it = max_ref[k].find(g);
      if (it != max_ref[k].end()) m += std::min(n, it->second);
    }
    s.matches[k] = m;
  }
  return s;
}

std::array<double, kMaxOrder> bleu_from_stats(const BleuStats& s) noexcept {
  std::array<double, kMaxOrder> out{};
  if (s.candidate_length <= 0) return out;
  const double bp = s.candidate_length < s.reference_length
                        ? std::exp(1.0 - s.reference_length / s.candidate_length)
                        : 1.0;
  double log_sum = 0;
  for (int k = 0; k < kMaxOrder; ++k) {
    if (s.guesses[k] <= 0 || s.matches[k] <= 0) break;
    log_sum += std::log(s.matches[k] / s.guesses[k]);
    out[k] = bp * std::exp(log_sum / (k + 1));
  }
  return out;
}

std::array<double, kMaxOrder> bleu_corpus(std::span<const CandidateRefs> pairs) {
  if (pairs.empty()) throw ContractError("bleu_corpus: empty corpus");
  BleuStats total;
  for (const auto& p : pairs) total += bleu_stats(p.candidate, p.references);
  return bleu_from_stats(total);
}

}  // namespace evil::metrics
