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

#include <cmath>

#include "evil/error.hpp"
#include "evil/prompt.hpp"
#include "evil/text.hpp"

namespace evil::prompt {

namespace {

constexpr std::string_view kClosingPunct = ".,?!;:'\")]}";

bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

// Length of the <bin_N> token starting at `pos`, or 0.
std::size_t token_length_at(std::string_view s, std::size_t pos) noexcept {
  constexpr std::string_view kOpen = "<bin_";
  if (s.substr(pos, kOpen.size()) != kOpen) return 0;
  std::size_t i = pos + kOpen.size();
  std::size_t digits = 0;
  while (i < s.size() && is_digit(s[i]) && digits < 4) {
    ++i;
    ++digits;
  }
  if (digits == 0 || digits > 3 || i >= s.size() || s[i] != '>') return 0;
  return i + 1 - pos;
}

std::string strip_once(std::string_view s, bool& changed) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t len = token_length_at(s, i);
    if (len == 0) {
      out.push_back(s[i++]);
      continue;
    }
    changed = true;
    std::size_t end = i;
    while ((len = token_length_at(s, end)) != 0) end += len;

    const bool space_before = !out.empty() && text::is_space(out.back());
    const bool at_start = out.empty();
    const bool space_after = end < s.size() && text::is_space(s[end]);
    const bool at_end = end == s.size();
    if ((space_before || at_start) && space_after) {
      while (end < s.size() && text::is_space(s[end])) ++end;
    } else if (space_before && (at_end || kClosingPunct.find(s[end]) != std::string_view::npos)) {
      while (!out.empty() && text::is_space(out.back())) out.pop_back();
    }
    i = end;
  }
  return out;
}

}  // namespace

BinCoord::BinCoord(int bin) : bin_(bin) {
  if (bin < 0 || bin >= kBinCount) {
    throw RangeError("bin " + std::to_string(bin) + " outside [0, " +
                     std::to_string(kBinCount - 1) + "]");
  }
}

BinCoord quantize_coord(double value, double extent) {
  if (!(extent > 0) || !std::isfinite(extent)) {
    throw RangeError("extent must be positive, got " + std::to_string(extent));
  }
  if (!(value >= 0 && value <= extent)) {
    throw RangeError("coordinate " + std::to_string(value) + " outside [0, " +
                     std::to_string(extent) + "]");
  }
  const auto bin = static_cast<int>(std::floor(value / extent * kBinCount));
  return BinCoord(std::min(bin, kBinCount - 1));
}

double dequantize_coord(BinCoord coord, double extent) noexcept {
  return (coord.bin() + 0.5) / kBinCount * extent;
}

std::string bin_token(BinCoord coord) { return "<bin_" + std::to_string(coord.bin()) + ">"; }

std::string bbox_to_tokens(const corpus::BoundingBox& box, double width, double height) {
  if (box.x2 < box.x1 || box.y2 < box.y1) {
    throw RangeError("box '" + box.label + "' has inverted corners");
  }
  return bin_token(quantize_coord(box.x1, width)) + bin_token(quantize_coord(box.y1, height)) +
         bin_token(quantize_coord(box.x2, width)) + bin_token(quantize_coord(box.y2, height));
}

std::string strip_bbox_tokens(std::string_view text) {
  bool changed = false;
  std::string out = strip_once(text, changed);
  while (changed) {
    changed = false;
    out = strip_once(out, changed);
  }
  return out;
}

std::string_view map_entailment_label(corpus::EntailmentLabel label) noexcept {
  switch (label) {
    case corpus::EntailmentLabel::kEntailment: return "yes";
    case corpus::EntailmentLabel::kNeutral: return "maybe";
    case corpus::EntailmentLabel::kContradiction: return "no";
  }
  return "";
}

corpus::EntailmentLabel entailment_label_for_answer(std::string_view answer_word) {
  if (answer_word == "yes") return corpus::EntailmentLabel::kEntailment;
  if (answer_word == "maybe") return corpus::EntailmentLabel::kNeutral;
  if (answer_word == "no") return corpus::EntailmentLabel::kContradiction;
  throw ContractError("'" + std::string(answer_word) + "' is not one of yes/maybe/no");
}

}  // namespace evil::prompt
