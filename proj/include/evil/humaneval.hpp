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
#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evil/corpus.hpp"
#include "evil/parse.hpp"
#include "json.hpp"

namespace evil::humaneval {

// Ordered from worst to best.
enum class RatingLabel { kNo, kWeakNo, kWeakYes, kYes };

inline constexpr std::array kAllRatingLabels{RatingLabel::kNo, RatingLabel::kWeakNo,
                                             RatingLabel::kWeakYes, RatingLabel::kYes};

// Exact rating value in thirds: No 0, WeakNo 1, WeakYes 2, Yes 3.
constexpr int rating_thirds(RatingLabel label) noexcept { return static_cast<int>(label); }
constexpr double rating_value(RatingLabel label) noexcept { return rating_thirds(label) / 3.0; }

// A rating at or below WeakNo must name at least one shortcoming.
constexpr bool needs_shortcoming(RatingLabel label) noexcept {
  return label == RatingLabel::kNo || label == RatingLabel::kWeakNo;
}

std::string_view to_string(RatingLabel label) noexcept;
RatingLabel parse_rating_label(std::string_view name);  // ValidationError

enum class Shortcoming : std::uint8_t {
  kConfusingSentence = 1,
  kInsufficientJustification = 2,
  kIncorrectImageDescription = 4,
};

inline constexpr std::array kAllShortcomings{Shortcoming::kConfusingSentence,
                                             Shortcoming::kInsufficientJustification,
                                             Shortcoming::kIncorrectImageDescription};

std::string_view to_string(Shortcoming s) noexcept;
Shortcoming parse_shortcoming(std::string_view name);  // ValidationError

class ShortcomingSet {
 public:
  constexpr ShortcomingSet() = default;
  constexpr ShortcomingSet(std::initializer_list<Shortcoming> items) {
    for (auto s : items) insert(s);
  }

  constexpr void insert(Shortcoming s) noexcept { bits_ |= static_cast<std::uint8_t>(s); }
  constexpr bool contains(Shortcoming s) const noexcept {
    return (bits_ & static_cast<std::uint8_t>(s)) != 0;
  }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::uint8_t bits() const noexcept { return bits_; }

  friend constexpr auto operator<=>(ShortcomingSet, ShortcomingSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

// Preference between the two explanations as presented (A first).
enum class Preference { kPreferA, kPreferB, kEqual };

std::string_view to_string(Preference p) noexcept;
Preference parse_preference(std::string_view name);  // ValidationError

enum class Source { kModel, kGroundTruth };

std::string_view to_string(Source s) noexcept;
Source parse_source(std::string_view name);  // ValidationError

struct EvalTask {
  std::string task_id;
  std::string sample_id;
  corpus::DatasetId dataset = corpus::DatasetId::kVqaX;
  corpus::ImageRef image;
  std::string question;
  std::vector<std::string> answer_options;  // empty for free-text answers
  std::array<std::string, 2> explanations;  // as presented: A, B
  std::array<Source, 2> order{Source::kModel, Source::kGroundTruth};
  std::string correct_answer;  // normalized; never shown to annotators

  // Position (0 = A, 1 = B) of the explanation from `source`.
  std::size_t position_of(Source source) const noexcept { return order[0] == source ? 0 : 1; }

  friend bool operator==(const EvalTask&, const EvalTask&) = default;
};

// Throws ValidationError unless the task is well formed.
void validate(const EvalTask& task);

nlohmann::json to_json(const EvalTask& task);
// Without the blinding order and the correct answer.
nlohmann::json to_public_json(const EvalTask& task);
EvalTask task_from_json(const nlohmann::json& j, std::size_t record_index = 0);

std::vector<EvalTask> read_tasks(const std::filesystem::path& path);
void write_tasks(const std::filesystem::path& path, std::span<const EvalTask> tasks);

struct ExplanationRating {
  RatingLabel label = RatingLabel::kYes;
  ShortcomingSet shortcomings;

  friend bool operator==(const ExplanationRating&, const ExplanationRating&) = default;
};

struct RatingRecord {
  std::string task_id;
  std::string annotator_id;
  std::string annotator_task_answer;
  std::array<ExplanationRating, 2> ratings;  // as presented: A, B
  Preference preference = Preference::kEqual;
  std::string timestamp;  // ISO 8601, informational

  friend bool operator==(const RatingRecord&, const RatingRecord&) = default;
};

// Throws ValidationError naming the offending field.
void validate(const RatingRecord& record);

nlohmann::json to_json(const RatingRecord& record);
// Structural problems raise ParseError; the result is not validated.
RatingRecord record_from_json(const nlohmann::json& j, std::size_t record_index = 0);

// Accepts plain record lines as well as a collection service event log, of
// which only the rating events are read.
std::vector<RatingRecord> read_records(const std::filesystem::path& path);

// Draws min(n, available) tasks uniformly without replacement from the
// correctly answered samples, and a blinding order for each, all from one
// generator seeded with `seed`. Throws ContractError when n < 1 or no sample
// was answered correctly, and JoinError for unmatched predictions.
std::vector<EvalTask> select_samples(std::span<const parse::ParsedPrediction> predictions,
                                     std::span<const corpus::Sample> gold, std::size_t n,
                                     std::uint64_t seed);

// True iff the annotator answered the task question correctly. Throws
// ContractError when the ids differ.
bool record_valid(const RatingRecord& record, const EvalTask& task);

// The rating and the preference a record gives, mapped back to sources.
struct UnblindedRating {
  RatingLabel model;
  RatingLabel ground_truth;
  ShortcomingSet model_shortcomings;
  ShortcomingSet ground_truth_shortcomings;
  std::optional<Source> preferred;  // nullopt for no preference
};

UnblindedRating unblind(const RatingRecord& record, const EvalTask& task);

inline constexpr std::size_t kQuorum = 5;

struct SourceSummary {
  std::size_t rated = 0;
  std::optional<double> mean_rating;  // x100
  // Share of rated explanations flagged with each shortcoming, in percent,
  // indexed like kAllShortcomings. Absent when nothing was rated.
  std::optional<std::array<double, 3>> shortcoming_percent;
};

struct PreferenceSummary {
  double model = 0;  // percent
  double no_preference = 0;
  double ground_truth = 0;
};

struct TaskSummary {
  std::string task_id;
  std::size_t valid = 0;
  std::size_t invalid = 0;
  bool under_quorum = true;
  // Labels of the valid records, ordered by annotator id.
  std::vector<RatingLabel> model_ratings;
  std::vector<RatingLabel> ground_truth_ratings;
  std::optional<double> model_mean;  // x100
  std::optional<double> ground_truth_mean;
};

struct HumanReport {
  std::size_t valid = 0;
  std::size_t invalid = 0;
  SourceSummary model;
  SourceSummary ground_truth;
  std::optional<PreferenceSummary> preference;
  std::vector<TaskSummary> tasks;  // every known task, by task id
  std::vector<std::string> under_quorum;
};

// Pure fold over the records. Wrong task answers, unknown task ids and
// valid records repeating an earlier valid (task, annotator) pair are counted
// as invalid and otherwise ignored.
HumanReport aggregate(std::span<const RatingRecord> records, std::span<const EvalTask> tasks);

// Percentages and means rounded to one decimal.
nlohmann::json to_json(const HumanReport& report);
std::string format_table(const HumanReport& report);

}  // namespace evil::humaneval
