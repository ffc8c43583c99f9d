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

#include <unordered_set>

#include "evil/metrics/ngram.hpp"

namespace evil::metrics {

NgramProfile NgramProfile::of(const TokenSeq& tokens) {
  NgramProfile p;
  p.length = tokens.size();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string key;
    for (int n = 1; n <= kMaxOrder && i + n <= tokens.size(); ++n) {
      if (n > 1) key.push_back(' ');
      key += tokens[i + n - 1];
      ++p.counts[n - 1][key];
    }
  }
  return p;
}

DocFreqTable DocFreqTable::build(std::span<const std::vector<NgramProfile>> reference_sets) {
  DocFreqTable table;
  table.corpus_size_ = reference_sets.size();
  std::unordered_set<std::string_view> seen;
  for (const auto& refs : reference_sets) {
    seen.clear();
    for (const auto& ref : refs) {
      for (const auto& order : ref.counts) {
        for (const auto& [ngram, count] : order) seen.insert(ngram);
      }
    }
    for (auto ngram : seen) ++table.df_[std::string(ngram)];
  }
  return table;
}

int DocFreqTable::df(const std::string& ngram) const noexcept {
  auto it = df_.find(ngram);
  return it == df_.end() ? 0 : it->second;
}

}  // namespace evil::metrics
