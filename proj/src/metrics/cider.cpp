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
#include <numeric>

#include "evil/error.hpp"
#include "evil/metrics/cider.hpp"

namespace evil::metrics {

namespace {

struct TfIdf {
  std::array<std::unordered_map<std::string_view, double>, kMaxOrder> weights;
  std::array<double, kMaxOrder> norms{};
  double length = 0;
};

TfIdf weigh(const NgramProfile& p, const DocFreqTable& df, double log_n) {
  TfIdf v;
  v.length = static_cast<double>(p.length);
  for (int k = 0; k < kMaxOrder; ++k) {
    double sq = 0;
    for (const auto& [g, tf] : p.counts[k]) {
      const double w = tf * (log_n - std::log(std::max(1.0, static_cast<double>(df.df(g)))));
      v.weights[k].emplace(g, w);
      sq += w * w;
    }
    v.norms[k] = std::sqrt(sq);
  }
  return v;
}

}  // namespace

CiderD::CiderD(DocFreqTable df, double sigma) : df_(std::move(df)), sigma_(sigma) {
  if (df_.corpus_size() == 0) throw ContractError("cider_d: empty corpus");
}

CiderD CiderD::for_corpus(std::span<const CandidateRefs> pairs, double sigma) {
  std::vector<std::vector<NgramProfile>> sets;
  sets.reserve(pairs.size());
  for (const auto& p : pairs) {
    auto& refs = sets.emplace_back();
    for (const auto& r : p.references) refs.push_back(NgramProfile::of(r));
  }
  return CiderD(DocFreqTable::build(sets), sigma);
}

double CiderD::score(const NgramProfile& candidate, std::span<const NgramProfile> references) const {
  if (references.empty()) return 0.0;
  const double log_n = std::log(static_cast<double>(df_.corpus_size()));
  const auto cand = weigh(candidate, df_, log_n);
  std::array<double, kMaxOrder> sums{};
  for (const auto& ref_profile : references) {
    const auto ref = weigh(ref_profile, df_, log_n);
    const double delta = cand.length - ref.length;
    const double penalty = std::exp(-(delta * delta) / (2 * sigma_ * sigma_));
    for (int k = 0; k < kMaxOrder; ++k) {
      double dot = 0;
      for (const auto& [g, wc] : cand.weights[k]) {
        auto it = ref.weights[k].find(g);
        if (it != ref.weights[k].end()) dot += std::min(wc, it->second) * it->second;
      }
      if (cand.norms[k] != 0 && ref.norms[k] != 0) dot /= cand.norms[k] * ref.norms[k];
      sums[k] += dot * penalty;
    }
  }
  const double mean_over_orders = std::accumulate(sums.begin(), sums.end(), 0.0) / kMaxOrder;
  return mean_over_orders / static_cast<double>(references.size()) * 10.0;
}

double CiderD::score(const TokenSeq& candidate, std::span<const TokenSeq> references) const {
  std::vector<NgramProfile> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back(NgramProfile::of(r));
  return score(NgramProfile::of(candidate), refs);
}

CiderResult cider_d(std::span<const CandidateRefs> pairs, double sigma) {
  if (pairs.empty()) throw ContractError("cider_d: empty corpus");
  const auto scorer = CiderD::for_corpus(pairs, sigma);
  CiderResult out;
  out.per_sample.reserve(pairs.size());
  for (const auto& p : pairs) out.per_sample.push_back(scorer.score(p.candidate, p.references));
  out.mean = std::accumulate(out.per_sample.begin(), out.per_sample.end(), 0.0) /
             static_cast<double>(out.per_sample.size());
  return out;
}

}  // namespace evil::metrics
