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

#include "evil/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "evil/error.hpp"
#include "evil/prompt.hpp"

namespace evil::scoring {

TaskScore TaskScore::from_thirds(int thirds) {
  if (thirds < 0 || thirds > 3) {
    throw ContractError("task score thirds out of range: " + std::to_string(thirds));
  }
  return TaskScore(thirds, 0);
}

TaskScore score_sample(const parse::ParsedPrediction& pred, const corpus::Sample& gold) {
  if (pred.sample_id != gold.id) {
    throw ContractError("score_sample: prediction '" + pred.sample_id + "' vs gold '" +
                        gold.id + "'");
  }
  switch (gold.dataset) {
    case corpus::DatasetId::kVqaX: {
      const auto* answers = std::get_if<std::vector<corpus::AnswerCount>>(&gold.gold);
      if (answers == nullptr || pred.answer.empty()) return TaskScore::zero();
      int n = 0;
      for (const auto& a : *answers) {
        if (parse::normalize_answer(a.text) == pred.answer) n += a.count;
      }
      return TaskScore::from_thirds(std::min(n, 3));
    }
    case corpus::DatasetId::kEsnliVe: {
      const auto* label = std::get_if<corpus::EntailmentLabel>(&gold.gold);
      if (label == nullptr) return TaskScore::zero();
      if (pred.answer != "yes" && pred.answer != "maybe" && pred.answer != "no") {
        return TaskScore::zero();
      }
      return prompt::entailment_label_for_answer(pred.answer) == *label ? TaskScore::full()
                                                                       : TaskScore::zero();
    }
    case corpus::DatasetId::kVcr: {
      const auto* idx = std::get_if<corpus::ChoiceIndex>(&gold.gold);
      if (idx == nullptr || !pred.vcr_index) return TaskScore::zero();
      return *pred.vcr_index == idx->value ? TaskScore::full() : TaskScore::zero();
    }
  }
  return TaskScore::zero();
}

double accuracy(std::span<const TaskScore> scores) {
  if (scores.empty()) throw ContractError("accuracy of an empty score list");
  long thirds = 0;
  for (auto s : scores) thirds += s.thirds();
  const double pct = 100.0 * static_cast<double>(thirds) / (3.0 * static_cast<double>(scores.size()));
  return std::round(pct * 10.0) / 10.0;
}

TaskScore apply_threshold(TaskScore score, double threshold) noexcept {
  return score.value() >= threshold ? TaskScore::full() : TaskScore::zero();
}

std::vector<Joined> join(std::span<const parse::ParsedPrediction> predictions,
                         std::span<const corpus::Sample> gold) {
  std::unordered_map<std::string_view, const corpus::Sample*> by_id;
  by_id.reserve(gold.size());
  for (const auto& s : gold) by_id.emplace(s.id, &s);

  std::vector<Joined> out;
  out.reserve(predictions.size());
  std::vector<std::string> missing;
  for (const auto& p : predictions) {
    auto it = by_id.find(p.sample_id);
    if (it == by_id.end()) {
      missing.push_back(p.sample_id);
    } else {
      out.push_back({&p, it->second});
    }
  }
  if (!missing.empty()) throw JoinError(std::move(missing));
  return out;
}

}  // namespace evil::scoring
