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
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace evil::corpus {

enum class DatasetId { kVqaX, kEsnliVe, kVcr };
enum class Split { kTrain, kValidation, kTest };

inline constexpr std::array<DatasetId, 3> kAllDatasets = {
    DatasetId::kVqaX, DatasetId::kEsnliVe, DatasetId::kVcr};
inline constexpr std::array<Split, 3> kAllSplits = {
    Split::kTrain, Split::kValidation, Split::kTest};

// Canonical short names: "vqax", "esnlive", "vcr" and "train", "val", "test".
std::string_view to_string(DatasetId id) noexcept;
std::string_view to_string(Split split) noexcept;
// Accepts the canonical names plus a few common spellings ("vqa-x",
// "e-snli-ve", "validation", ...). Throws ContractError otherwise.
DatasetId parse_dataset(std::string_view name);
Split parse_split(std::string_view name);

struct BoundingBox {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  std::string label;  // e.g. "person3"
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// Throws ValidationError unless 0 <= x1 <= x2 <= width and likewise for y.
void validate_box(const BoundingBox& box, double width, double height);

struct ImageRef {
  std::string path;
  int width = 0;  // pixels; 0 means unknown (allowed outside VCR)
  int height = 0;
  friend bool operator==(const ImageRef&, const ImageRef&) = default;
};

struct AnswerCount {
  std::string text;
  int count = 0;  // number of annotators that gave this answer
  friend bool operator==(const AnswerCount&, const AnswerCount&) = default;
};

enum class EntailmentLabel { kEntailment, kNeutral, kContradiction };

std::string_view to_string(EntailmentLabel label) noexcept;
// Throws ValidationError for anything outside the closed label set.
EntailmentLabel parse_entailment_label(std::string_view name);

struct ChoiceIndex {
  int value = 0;  // 0..3
  friend bool operator==(ChoiceIndex, ChoiceIndex) = default;
};

// VQA-X: annotator answers with multiplicity. e-SNLI-VE: the entailment
// label. VCR: index of the correct choice.
using GoldAnswer =
    std::variant<std::vector<AnswerCount>, EntailmentLabel, ChoiceIndex>;

struct Sample {
  std::string id;
  DatasetId dataset = DatasetId::kVqaX;
  Split split = Split::kTrain;
  ImageRef image;
  std::string question_or_hypothesis;
  std::vector<std::string> choices;           // VCR only, exactly 4
  std::map<std::string, BoundingBox> boxes;   // VCR only, keyed by label
  GoldAnswer gold;
  std::vector<std::string> gold_explanations;

  friend bool operator==(const Sample&, const Sample&) = default;
};

// Throws ValidationError naming the sample id on the first broken invariant.
void validate(const Sample& sample);

nlohmann::json to_json(const Sample& sample);
// Structural problems (missing or mistyped fields) raise ParseError tagged
// with `record_index`; an out-of-set entailment label raises ValidationError.
// Other invariants are left to validate().
Sample sample_from_json(const nlohmann::json& j, std::size_t record_index = 0);

// Reads a canonical JSON-lines sample file (any dataset mix), validating
// every record and rejecting duplicate ids within a (dataset, split).
std::vector<Sample> read_samples(const std::filesystem::path& path);
void write_samples(const std::filesystem::path& path,
                   std::span<const Sample> samples);

// <root>/<dataset>/<split>.jsonl
std::filesystem::path dataset_file(const std::filesystem::path& root,
                                   DatasetId dataset, Split split);

// Loads one split. Samples are returned sorted by id.
std::vector<Sample> load_dataset(DatasetId dataset, Split split,
                                 const std::filesystem::path& root);

// Concatenates same-split parts, prefixing ids with "<dataset>/". No
// rebalancing and no deduplication.
std::vector<Sample> build_combined(std::span<const std::vector<Sample>> parts);

// Reverses the "<dataset>/" namespacing applied by build_combined.
std::string original_id(std::string_view combined_id);

class SplitStats {
 public:
  std::int64_t count(DatasetId dataset, Split split) const noexcept;
  std::int64_t dataset_total(DatasetId dataset) const noexcept;
  std::int64_t split_total(Split split) const noexcept;
  std::int64_t total() const noexcept;

  void add(DatasetId dataset, Split split, std::int64_t n = 1) noexcept;

  friend bool operator==(const SplitStats&, const SplitStats&) = default;

 private:
  std::array<std::array<std::int64_t, 3>, 3> counts_{};
};

SplitStats stats(std::span<const Sample> samples);

nlohmann::json to_json(const SplitStats& stats);

// Published split sizes in tenths of a thousand samples (29.5k -> 295).
struct PublishedSizes {
  std::array<std::array<int, 3>, 3> per_dataset;  // [dataset][split]
  std::array<int, 3> combined;                     // [split]
};

inline constexpr PublishedSizes kPublishedSizes{
    {{{295, 15, 20}, {4017, 143, 147}, {2129, 265, 252}}},
    {6441, 423, 419}};

constexpr bool published_sizes_consistent(const PublishedSizes& p) {
  for (std::size_t s = 0; s < 3; ++s) {
    int sum = 0;
    for (std::size_t d = 0; d < 3; ++d) sum += p.per_dataset[d][s];
    if (sum != p.combined[s]) return false;
  }
  return true;
}
static_assert(published_sizes_consistent(kPublishedSizes),
              "combined split sizes must equal the sum of their parts");

// Rounds a count to tenths of a thousand, the published reporting grain.
int to_tenths_of_thousand(std::int64_t count) noexcept;

// Release-format adapters. Each returns validated canonical samples for one
// split; the layouts they accept are described in docs/data.md.
std::vector<Sample> convert_vqax(const std::filesystem::path& release_json,
                                 Split split);
std::vector<Sample> convert_esnlive(const std::filesystem::path& release_csv,
                                    Split split);
std::vector<Sample> convert_vcr(const std::filesystem::path& release_jsonl,
                                const std::filesystem::path& split_manifest,
                                Split split,
                                const std::filesystem::path& metadata_root);

}  // namespace evil::corpus
