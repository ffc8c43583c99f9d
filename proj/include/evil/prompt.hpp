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

#include <string>
#include <string_view>

#include "evil/corpus.hpp"

namespace evil::prompt {

inline constexpr int kBinCount = 1000;

// A coordinate quantized into one of kBinCount bins along its axis.
class BinCoord {
 public:
  // Throws RangeError unless 0 <= bin < kBinCount.
  explicit BinCoord(int bin);

  int bin() const noexcept { return bin_; }

  friend auto operator<=>(BinCoord, BinCoord) = default;

 private:
  int bin_;
};

// floor(value / extent * 1000), clamped to 999 at value == extent.
// Throws RangeError unless extent > 0 and 0 <= value <= extent.
BinCoord quantize_coord(double value, double extent);

// Bin midpoint mapped back to pixels.
double dequantize_coord(BinCoord coord, double extent) noexcept;

// "<bin_K>"
std::string bin_token(BinCoord coord);

// "<bin_X1><bin_Y1><bin_X2><bin_Y2>". Throws RangeError when the box does
// not fit in a width x height image or has inverted corners.
std::string bbox_to_tokens(const corpus::BoundingBox& box, double width, double height);

// Deletes every <bin_N> token (1-3 digits) and merges the whitespace the
// deletion leaves behind. Text without such tokens is returned unchanged.
std::string strip_bbox_tokens(std::string_view text);

// entailment -> yes, neutral -> maybe, contradiction -> no.
std::string_view map_entailment_label(corpus::EntailmentLabel label) noexcept;
// Inverse mapping; throws ContractError for anything but yes/maybe/no.
corpus::EntailmentLabel entailment_label_for_answer(std::string_view answer_word);

inline constexpr std::string_view kSeparator = " because ";

struct PromptText {
  std::string prompt;
  std::string target;

  friend bool operator==(const PromptText&, const PromptText&) = default;
};

// The answer word a model is trained to emit: the most frequent VQA-X
// answer (first on ties), the mapped entailment word, or "answerK".
std::string gold_answer_text(const corpus::Sample& sample);

// Appends "<bin_..>" x4 after every object reference ("person2", "car1")
// in `text`. Throws ValidationError when a reference has no box.
std::string expand_references(std::string_view text, const corpus::Sample& sample);

// True for words of the form <lowercase letters><digits>, e.g. "person3".
bool is_object_reference(std::string_view word) noexcept;

PromptText build_prompt(const corpus::Sample& sample);

nlohmann::json to_json(const corpus::Sample& sample, const PromptText& prompt);

}  // namespace evil::prompt
