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

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evil/corpus.hpp"
#include "evil/metrics/bertscore.hpp"
#include "evil/metrics/bleu.hpp"
#include "evil/metrics/cider.hpp"
#include "evil/metrics/meteor.hpp"
#include "evil/metrics/rouge.hpp"
#include "evil/parse.hpp"
#include "evil/scoring.hpp"
#include "json.hpp"

namespace evil::metrics {

enum class Mode { kFiltered, kUnfiltered, kScaled };

inline constexpr std::array kAllModes{Mode::kFiltered, Mode::kUnfiltered, Mode::kScaled};

std::string_view to_string(Mode mode) noexcept;
Mode parse_mode(std::string_view name);  // ContractError on unknown names

inline constexpr std::string_view kSpiceAbsentReason =
    "SPICE is not computed: it needs an external scene-graph parser";

// Corpus values on the x100 reporting scale.
struct MetricValues {
  std::array<double, kMaxOrder> bleu{};
  double rouge_l = 0;
  double meteor = 0;
  double cider = 0;
  std::optional<double> bert_score;  // absent without a provider
};

struct MetricCounts {
  std::size_t total = 0;
  std::size_t evaluated = 0;
  std::size_t excluded = 0;
  std::size_t malformed = 0;
};

struct MetricReport {
  Mode mode = Mode::kUnfiltered;
  double accuracy = 0;  // percent, one decimal
  MetricCounts counts;
  std::optional<MetricValues> values;  // null when no sample was evaluated
  std::optional<std::string> bert_score_unavailable;
};

struct EvaluateOptions {
  RougeAggregation rouge = RougeAggregation::kBestPrecisionRecall;
  MeteorConfig meteor;
  EmbeddingProvider* embeddings = nullptr;  // not owned
  unsigned threads = 0;                     // 0 picks the hardware concurrency
};

// Per-sample intermediate results. BLEU keeps its sufficient statistics so
// the corpus value can be formed over any subset.
struct SampleMetrics {
  std::string id;
  scoring::TaskScore score;
  bool malformed = false;
  BleuStats bleu;
  double rouge_l = 0;
  double meteor = 0;
  double cider = 0;
  std::optional<double> bert_score;
};

// Scores every joined sample once; reports in any mode are then cheap
// reductions. The CIDEr document frequencies cover the references of every
// joined sample, whatever the mode.
class MetricEngine {
 public:
  // Throws JoinError for unmatched predictions and ContractError when there
  // are none.
  MetricEngine(std::span<const parse::ParsedPrediction> predictions,
               std::span<const corpus::Sample> gold, const EvaluateOptions& options = {});

  MetricReport report(Mode mode) const;

  std::span<const SampleMetrics> samples() const noexcept { return samples_; }

 private:
  std::vector<SampleMetrics> samples_;
  double accuracy_ = 0;
  bool has_bert_score_ = false;
  std::optional<std::string> bert_score_unavailable_;
};

MetricReport evaluate(std::span<const parse::ParsedPrediction> predictions,
                      std::span<const corpus::Sample> gold, Mode mode,
                      const EvaluateOptions& options = {});

// Metric values are rounded to one decimal.
nlohmann::json to_json(const MetricReport& report);

std::string format_table(const MetricReport& report);

}  // namespace evil::metrics
