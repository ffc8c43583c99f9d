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
#include <unordered_map>
#include <utility>

#include "evil/metrics/meteor.hpp"
#include "evil/metrics/porter.hpp"

namespace evil::metrics {

namespace {

struct Indexed {
  std::size_t pos;
  std::string word;
};

using Matches = std::vector<std::pair<std::size_t, std::size_t>>;  // (candidate, reference)

std::vector<Indexed> enumerate(const TokenSeq& tokens) {
  std::vector<Indexed> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) out.push_back({i, tokens[i]});
  return out;
}

// Drops the entries flagged in `used`, keeping order.
void compact(std::vector<Indexed>& list, const std::vector<bool>& used) {
  std::size_t w = 0;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (used[i]) continue;
    if (w != i) list[w] = std::move(list[i]);
    ++w;
  }
  list.resize(w);
}

void exact_stage(std::vector<Indexed>& cand, std::vector<Indexed>& ref, Matches& out) {
  std::unordered_map<std::string, std::vector<std::size_t>> positions;
  for (std::size_t j = 0; j < ref.size(); ++j) positions[ref[j].word].push_back(j);
  std::vector<bool> cand_used(cand.size()), ref_used(ref.size());
  for (std::size_t i = cand.size(); i-- > 0;) {
    auto it = positions.find(cand[i].word);
    if (it == positions.end() || it->second.empty()) continue;
    const std::size_t j = it->second.back();
    it->second.pop_back();
    out.emplace_back(cand[i].pos, ref[j].pos);
    cand_used[i] = true;
    ref_used[j] = true;
  }
  compact(cand, cand_used);
  compact(ref, ref_used);
}

void synonym_stage(std::vector<Indexed>& cand, std::vector<Indexed>& ref,
                   const SynonymSource& source, Matches& out) {
  std::vector<bool> cand_used(cand.size()), ref_used(ref.size());
  for (std::size_t i = cand.size(); i-- > 0;) {
    auto options = source.synonyms(cand[i].word);
    std::erase_if(options, [](const std::string& w) { return w.find('_') != std::string::npos; });
    options.push_back(cand[i].word);
    std::size_t best = ref.size();
    for (std::size_t j = ref.size(); j-- > 0;) {
      if (ref_used[j]) continue;
      if (std::find(options.begin(), options.end(), ref[j].word) != options.end()) {
        best = j;
        break;
      }
    }
    if (best == ref.size()) continue;
    out.emplace_back(cand[i].pos, ref[best].pos);
    cand_used[i] = true;
    ref_used[best] = true;
  }
  compact(cand, cand_used);
  compact(ref, ref_used);
}

std::size_t count_chunks(Matches& matches) {
  if (matches.empty()) return 0;
  std::sort(matches.begin(), matches.end());
  std::size_t chunks = 1;
  for (std::size_t k = 1; k < matches.size(); ++k) {
    const auto& [pc, pr] = matches[k - 1];
    const auto& [c, r] = matches[k];
    if (!(c == pc + 1 && r == pr + 1)) ++chunks;
  }
  return chunks;
}

}  // namespace

Alignment align(const TokenSeq& candidate, const TokenSeq& reference, const MeteorConfig& config) {
  auto cand = enumerate(candidate);
  auto ref = enumerate(reference);
  Matches matches;
  exact_stage(cand, ref, matches);
  if (config.stem_stage) {
    for (auto& e : cand) e.word = porter_stem(e.word);
    for (auto& e : ref) e.word = porter_stem(e.word);
    exact_stage(cand, ref, matches);
  }
  // The synonym stage looks up whatever survived the earlier stages, which
  // are stems when the stem stage ran.
  if (config.synonyms != nullptr) synonym_stage(cand, ref, *config.synonyms, matches);
  Alignment a;
  a.matches = matches.size();
  a.chunks = count_chunks(matches);
  return a;
}

double meteor_single(const TokenSeq& candidate, const TokenSeq& reference,
                     const MeteorConfig& config) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const auto a = align(candidate, reference, config);
  if (a.matches == 0) return 0.0;
  const double m = static_cast<double>(a.matches);
  const double p = m / static_cast<double>(candidate.size());
  const double r = m / static_cast<double>(reference.size());
  const double fmean = p * r / (config.alpha * p + (1 - config.alpha) * r);
  const double penalty = config.gamma * std::pow(static_cast<double>(a.chunks) / m, config.beta);
  return fmean * (1 - penalty);
}

double meteor(const TokenSeq& candidate, std::span<const TokenSeq> references,
              const MeteorConfig& config) {
  double best = 0;
  for (const auto& ref : references) best = std::max(best, meteor_single(candidate, ref, config));
  return best;
}

}  // namespace evil::metrics
