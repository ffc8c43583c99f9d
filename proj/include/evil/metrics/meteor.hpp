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
#include <string>
#include <string_view>
#include <vector>

#include "evil/metrics/ngram.hpp"

namespace evil::metrics {

// Lexical resource for the optional synonym stage.
class SynonymSource {
 public:
  virtual ~SynonymSource() = default;
  virtual std::vector<std::string> synonyms(std::string_view word) const = 0;
};

struct MeteorConfig {
  double alpha = 0.9;
  double beta = 3.0;
  double gamma = 0.5;
  bool stem_stage = true;
  const SynonymSource* synonyms = nullptr;  // not owned; null disables the stage
};

struct Alignment {
  std::size_t matches = 0;
  std::size_t chunks = 0;
};

// Staged unigram alignment: exact, then stems, then synonyms. Within a stage
// candidate positions are visited from last to first and each takes the last
// still-unmatched reference position it can.
Alignment align(const TokenSeq& candidate, const TokenSeq& reference,
                const MeteorConfig& config = {});

double meteor_single(const TokenSeq& candidate, const TokenSeq& reference,
                     const MeteorConfig& config = {});

// Maximum over references; 0 when there are none.
double meteor(const TokenSeq& candidate, std::span<const TokenSeq> references,
              const MeteorConfig& config = {});

}  // namespace evil::metrics
