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
#include <cstdio>
#include <random>

#include "evil/error.hpp"
#include "evil/humaneval.hpp"
#include "evil/prompt.hpp"
#include "evil/scoring.hpp"
#include "evil/text.hpp"

namespace evil::humaneval {

namespace {

// Uniform draw from [0, bound) by rejection, so the sequence depends only on
// the generator and not on the standard library's distributions.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

std::vector<std::string> answer_options(const corpus::Sample& s) {
  switch (s.dataset) {
    case corpus::DatasetId::kEsnliVe:
      return {"yes", "maybe", "no"};
    case corpus::DatasetId::kVcr:
      return s.choices;
    case corpus::DatasetId::kVqaX:
      break;
  }
  return {};
}

std::string correct_answer(const parse::ParsedPrediction& p, const corpus::Sample& s) {
  if (s.dataset == corpus::DatasetId::kVcr) {
    return parse::normalize_answer(s.choices.at(static_cast<std::size_t>(*p.vcr_index)));
  }
  return parse::normalize_answer(p.answer);
}

std::string task_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t%04zu", index + 1);
  return buf;
}

}  // namespace

std::vector<EvalTask> select_samples(std::span<const parse::ParsedPrediction> predictions,
                                     std::span<const corpus::Sample> gold, std::size_t n,
                                     std::uint64_t seed) {
  if (n < 1) throw ContractError("select_samples: n must be at least 1");
  std::vector<scoring::Joined> correct;
  for (const auto& j : scoring::join(predictions, gold)) {
    if (scoring::score_sample(*j.prediction, *j.gold).correct()) correct.push_back(j);
  }
  if (correct.empty()) throw ContractError("select_samples: no correctly answered samples");
  std::sort(correct.begin(), correct.end(), [](const auto& a, const auto& b) {
    return a.prediction->sample_id < b.prediction->sample_id;
  });

  std::mt19937_64 rng(seed);
  const std::size_t take = std::min(n, correct.size());
  std::vector<EvalTask> tasks;
  tasks.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    const auto j = i + uniform_below(rng, correct.size() - i);
    std::swap(correct[i], correct[j]);
    const auto& pred = *correct[i].prediction;
    const auto& sample = *correct[i].gold;

    EvalTask t;
    t.task_id = task_id(i);
    t.sample_id = sample.id;
    t.dataset = sample.dataset;
    t.image = sample.image;
    t.question = sample.question_or_hypothesis;
    t.answer_options = answer_options(sample);
    t.correct_answer = correct_answer(pred, sample);
    const std::string model(text::trim(prompt::strip_bbox_tokens(pred.explanation)));
    const std::string truth = sample.gold_explanations.front();
    if (rng() & 1) {
      t.order = {Source::kGroundTruth, Source::kModel};
      t.explanations = {truth, model};
    } else {
      t.order = {Source::kModel, Source::kGroundTruth};
      t.explanations = {model, truth};
    }
    tasks.push_back(std::move(t));
  }
  return tasks;
}

bool record_valid(const RatingRecord& record, const EvalTask& task) {
  if (record.task_id != task.task_id) {
    throw ContractError("record for task '" + record.task_id + "' checked against task '" +
                        task.task_id + "'");
  }
  return parse::normalize_answer(record.annotator_task_answer) ==
         parse::normalize_answer(task.correct_answer);
}

UnblindedRating unblind(const RatingRecord& record, const EvalTask& task) {
  const auto m = task.position_of(Source::kModel);
  const auto g = task.position_of(Source::kGroundTruth);
  UnblindedRating u{record.ratings[m].label, record.ratings[g].label,
                    record.ratings[m].shortcomings, record.ratings[g].shortcomings,
                    std::nullopt};
  if (record.preference != Preference::kEqual) {
    u.preferred = task.order[record.preference == Preference::kPreferA ? 0 : 1];
  }
  return u;
}

}  // namespace evil::humaneval
