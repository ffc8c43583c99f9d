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
#include <set>
#include <utility>

#include "evil/corpus.hpp"
#include "evil/error.hpp"
#include "evil/text.hpp"

namespace evil::corpus {

namespace {

using nlohmann::json;

template <typename E, std::size_t N>
E lookup(std::string_view name, const std::array<std::pair<std::string_view, E>, N>& table,
         std::string_view what) {
  const std::string lowered = text::to_lower_ascii(text::trim(name));
  for (const auto& [key, value] : table) {
    if (key == lowered) return value;
  }
  throw ContractError("unknown " + std::string(what) + " '" + std::string(name) + "'");
}

[[noreturn]] void invalid(const Sample& s, const std::string& what) {
  throw ValidationError("sample '" + s.id + "': " + what);
}

}  // namespace

std::string_view to_string(DatasetId id) noexcept {
  switch (id) {
    case DatasetId::kVqaX: return "vqax";
    case DatasetId::kEsnliVe: return "esnlive";
    case DatasetId::kVcr: return "vcr";
  }
  return "?";
}

std::string_view to_string(Split split) noexcept {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValidation: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

DatasetId parse_dataset(std::string_view name) {
  static constexpr std::array<std::pair<std::string_view, DatasetId>, 6> kTable{{
      {"vqax", DatasetId::kVqaX},
      {"vqa-x", DatasetId::kVqaX},
      {"esnlive", DatasetId::kEsnliVe},
      {"e-snli-ve", DatasetId::kEsnliVe},
      {"vcr", DatasetId::kVcr},
      {"vcr-x", DatasetId::kVcr},
  }};
  return lookup(name, kTable, "dataset");
}

Split parse_split(std::string_view name) {
  static constexpr std::array<std::pair<std::string_view, Split>, 5> kTable{{
      {"train", Split::kTrain},
      {"val", Split::kValidation},
      {"validation", Split::kValidation},
      {"dev", Split::kValidation},
      {"test", Split::kTest},
  }};
  return lookup(name, kTable, "split");
}

std::string_view to_string(EntailmentLabel label) noexcept {
  switch (label) {
    case EntailmentLabel::kEntailment: return "entailment";
    case EntailmentLabel::kNeutral: return "neutral";
    case EntailmentLabel::kContradiction: return "contradiction";
  }
  return "?";
}

EntailmentLabel parse_entailment_label(std::string_view name) {
  if (name == "entailment") return EntailmentLabel::kEntailment;
  if (name == "neutral") return EntailmentLabel::kNeutral;
  if (name == "contradiction") return EntailmentLabel::kContradiction;
  throw ValidationError("unknown entailment label '" + std::string(name) + "'");
}

void validate_box(const BoundingBox& b, double width, double height) {
  const bool ok = std::isfinite(b.x1) && std::isfinite(b.y1) &&
                  std::isfinite(b.x2) && std::isfinite(b.y2) && 0 <= b.x1 &&
                  b.x1 <= b.x2 && b.x2 <= width && 0 <= b.y1 && b.y1 <= b.y2 &&
                  b.y2 <= height;
  if (!ok) {
    throw ValidationError("box '" + b.label + "' (" + std::to_string(b.x1) + ", " +
                          std::to_string(b.y1) + ", " + std::to_string(b.x2) + ", " +
                          std::to_string(b.y2) + ") lies outside a " +
                          std::to_string(width) + "x" + std::to_string(height) +
                          " image or has inverted corners");
  }
}

void validate(const Sample& s) {
  if (s.id.empty()) throw ValidationError("sample with empty id");
  if (text::trim(s.question_or_hypothesis).empty()) invalid(s, "empty question/hypothesis");
  if (s.gold_explanations.empty()) invalid(s, "no gold explanations");
  for (const auto& e : s.gold_explanations) {
    if (text::trim(e).empty()) invalid(s, "empty gold explanation");
  }
  if (s.image.width < 0 || s.image.height < 0) invalid(s, "negative image size");

  switch (s.dataset) {
    case DatasetId::kVqaX: {
      const auto* answers = std::get_if<std::vector<AnswerCount>>(&s.gold);
      if (answers == nullptr || answers->empty()) {
        invalid(s, "VQA-X gold_answers must be a nonempty list of (text, count)");
      }
      for (const auto& a : *answers) {
        if (a.count < 1) invalid(s, "gold answer '" + a.text + "' has count < 1");
      }
      break;
    }
    case DatasetId::kEsnliVe:
      if (!std::holds_alternative<EntailmentLabel>(s.gold)) {
        invalid(s, "e-SNLI-VE gold_answers must be an entailment label");
      }
      break;
    case DatasetId::kVcr: {
      const auto* idx = std::get_if<ChoiceIndex>(&s.gold);
      if (idx == nullptr || idx->value < 0 || idx->value > 3) {
        invalid(s, "VCR gold_answers must be a choice index in 0..3");
      }
      if (s.choices.size() != 4) invalid(s, "VCR samples need exactly 4 choices");
      if (s.image.width <= 0 || s.image.height <= 0) {
        invalid(s, "VCR samples need the image size");
      }
      for (const auto& [key, box] : s.boxes) {
        if (key != box.label) invalid(s, "box key '" + key + "' differs from its label");
        try {
          validate_box(box, s.image.width, s.image.height);
        } catch (const ValidationError& e) {
          invalid(s, e.what());
        }
      }
      break;
    }
  }
  if (s.dataset != DatasetId::kVcr && (!s.choices.empty() || !s.boxes.empty())) {
    invalid(s, "choices and boxes are reserved for VCR");
  }
}

json to_json(const Sample& s) {
  json j;
  j["id"] = s.id;
  j["dataset"] = to_string(s.dataset);
  j["split"] = to_string(s.split);
  j["image"] = {{"path", s.image.path}, {"width", s.image.width}, {"height", s.image.height}};
  j["question_or_hypothesis"] = s.question_or_hypothesis;
  if (!s.choices.empty()) j["choices"] = s.choices;
  if (!s.boxes.empty()) {
    json boxes = json::object();
    for (const auto& [key, b] : s.boxes) {
      boxes[key] = {{"x1", b.x1}, {"y1", b.y1}, {"x2", b.x2}, {"y2", b.y2}};
    }
    j["boxes"] = std::move(boxes);
  }
  std::visit(
      [&](const auto& gold) {
        using T = std::decay_t<decltype(gold)>;
        if constexpr (std::is_same_v<T, std::vector<AnswerCount>>) {
          json answers = json::array();
          for (const auto& a : gold) answers.push_back({{"text", a.text}, {"count", a.count}});
          j["gold_answers"] = std::move(answers);
        } else if constexpr (std::is_same_v<T, EntailmentLabel>) {
          j["gold_answers"] = to_string(gold);
        } else {
          j["gold_answers"] = gold.value;
        }
      },
      s.gold);
  j["gold_explanations"] = s.gold_explanations;
  return j;
}

Sample sample_from_json(const json& j, std::size_t record_index) {
  Sample s;
  try {
    s.id = j.at("id").get<std::string>();
    s.dataset = parse_dataset(j.at("dataset").get<std::string>());
    s.split = parse_split(j.at("split").get<std::string>());
    const auto& image = j.at("image");
    s.image.path = image.at("path").get<std::string>();
    s.image.width = image.value("width", 0);
    s.image.height = image.value("height", 0);
    s.question_or_hypothesis = j.at("question_or_hypothesis").get<std::string>();
    if (j.contains("choices")) s.choices = j.at("choices").get<std::vector<std::string>>();
    if (j.contains("boxes")) {
      for (const auto& [key, b] : j.at("boxes").items()) {
        s.boxes[key] = BoundingBox{b.at("x1").get<double>(), b.at("y1").get<double>(),
                                   b.at("x2").get<double>(), b.at("y2").get<double>(), key};
      }
    }
    s.gold_explanations = j.at("gold_explanations").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(record_index, e.what());
  } catch (const ContractError& e) {
    throw ParseError(record_index, e.what());
  }

  const json* gold = nullptr;
  try {
    gold = &j.at("gold_answers");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(record_index, e.what());
  }
  switch (s.dataset) {
    case DatasetId::kVqaX: {
      if (!gold->is_array()) throw ParseError(record_index, "gold_answers must be a list");
      std::vector<AnswerCount> answers;
      try {
        for (const auto& a : *gold) {
          answers.push_back({a.at("text").get<std::string>(), a.at("count").get<int>()});
        }
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(record_index, e.what());
      }
      s.gold = std::move(answers);
      break;
    }
    case DatasetId::kEsnliVe:
      if (!gold->is_string()) throw ParseError(record_index, "gold_answers must be a label");
      try {
        s.gold = parse_entailment_label(gold->get<std::string>());
      } catch (const ValidationError& e) {
        invalid(s, e.what());
      }
      break;
    case DatasetId::kVcr:
      if (!gold->is_number_integer()) {
        throw ParseError(record_index, "gold_answers must be a choice index");
      }
      s.gold = ChoiceIndex{gold->get<int>()};
      break;
  }
  return s;
}

std::string original_id(std::string_view combined_id) {
  const auto slash = combined_id.find('/');
  if (slash == std::string_view::npos) return std::string(combined_id);
  return std::string(combined_id.substr(slash + 1));
}

std::vector<Sample> build_combined(std::span<const std::vector<Sample>> parts) {
  std::optional<Split> split;
  std::size_t total = 0;
  for (const auto& part : parts) {
    for (const auto& s : part) {
      if (split && *split != s.split) {
        throw ContractError("build_combined: mixed splits ('" + std::string(to_string(*split)) +
                            "' and '" + std::string(to_string(s.split)) + "')");
      }
      split = s.split;
    }
    total += part.size();
  }
  std::vector<Sample> combined;
  combined.reserve(total);
  for (const auto& part : parts) {
    for (const auto& s : part) {
      Sample copy = s;
      copy.id = std::string(to_string(s.dataset)) + "/" + s.id;
      combined.push_back(std::move(copy));
    }
  }
  return combined;
}

std::int64_t SplitStats::count(DatasetId d, Split s) const noexcept {
  return counts_[static_cast<std::size_t>(d)][static_cast<std::size_t>(s)];
}

std::int64_t SplitStats::dataset_total(DatasetId d) const noexcept {
  std::int64_t n = 0;
  for (auto s : kAllSplits) n += count(d, s);
  return n;
}

std::int64_t SplitStats::split_total(Split s) const noexcept {
  std::int64_t n = 0;
  for (auto d : kAllDatasets) n += count(d, s);
  return n;
}

std::int64_t SplitStats::total() const noexcept {
  std::int64_t n = 0;
  for (auto s : kAllSplits) n += split_total(s);
  return n;
}

void SplitStats::add(DatasetId d, Split s, std::int64_t n) noexcept {
  counts_[static_cast<std::size_t>(d)][static_cast<std::size_t>(s)] += n;
}

SplitStats stats(std::span<const Sample> samples) {
  SplitStats out;
  for (const auto& s : samples) out.add(s.dataset, s.split);
  return out;
}

json to_json(const SplitStats& st) {
  json j;
  json per = json::object();
  for (auto d : kAllDatasets) {
    json row = json::object();
    for (auto s : kAllSplits) row[std::string(to_string(s))] = st.count(d, s);
    row["total"] = st.dataset_total(d);
    per[std::string(to_string(d))] = std::move(row);
  }
  j["datasets"] = std::move(per);
  json splits = json::object();
  for (auto s : kAllSplits) splits[std::string(to_string(s))] = st.split_total(s);
  j["combined"] = std::move(splits);
  j["total"] = st.total();
  return j;
}

int to_tenths_of_thousand(std::int64_t count) noexcept {
  return static_cast<int>(std::llround(static_cast<double>(count) / 100.0));
}

}  // namespace evil::corpus
