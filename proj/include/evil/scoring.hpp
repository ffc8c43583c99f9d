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

#include <compare>
#include <span>
#include <vector>

#include "evil/corpus.hpp"
#include "evil/parse.hpp"

namespace evil::scoring {

// Task score in thirds: VQA-X soft scores take 0..3, the single-answer
// tasks only 0 or 3.
class TaskScore {
 public:
  constexpr TaskScore() = default;

  static TaskScore from_thirds(int thirds);  // ContractError outside 0..3
  static constexpr TaskScore zero() { return TaskScore(0, 0); }
  static constexpr TaskScore full() { return TaskScore(3, 0); }

  constexpr int thirds() const noexcept { return thirds_; }
  constexpr double value() const noexcept { return thirds_ / 3.0; }
  constexpr bool correct() const noexcept { return thirds_ > 0; }

  friend constexpr auto operator<=>(TaskScore, TaskScore) = default;

 private:
  constexpr TaskScore(int thirds, int) : thirds_(thirds) {}
  int thirds_ = 0;
};

// VQA-X: min(n/3, 1) for the annotator count n of the matching gold
// answer. e-SNLI-VE: yes/maybe/no must map to the gold label. VCR: the
// parsed choice index must equal the gold index.
// Throws ContractError when the ids differ.
TaskScore score_sample(const parse::ParsedPrediction& pred, const corpus::Sample& gold);

// Mean score x 100, rounded to one decimal. ContractError on empty input.
double accuracy(std::span<const TaskScore> scores);

// Collapses a soft score to 0/1 at `threshold` (on the [0, 1] scale).
TaskScore apply_threshold(TaskScore score, double threshold) noexcept;

// A prediction joined with its gold sample.
struct Joined {
  const parse::ParsedPrediction* prediction;
  const corpus::Sample* gold;
};

// Pairs every prediction with the gold sample of the same id, keeping
// prediction order. Throws JoinError listing every unmatched id.
std::vector<Joined> join(std::span<const parse::ParsedPrediction> predictions,
                         std::span<const corpus::Sample> gold);

}  // namespace evil::scoring
