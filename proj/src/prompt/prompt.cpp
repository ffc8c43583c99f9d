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

#include "evil/error.hpp"
#include "evil/prompt.hpp"
#include "evil/text.hpp"

namespace evil::prompt {

namespace {

constexpr std::string_view kTrailingPunct = ".,?!;:'\"";

}  // namespace

bool is_object_reference(std::string_view word) noexcept {
  std::size_t i = 0;
  while (i < word.size() && word[i] >= 'a' && word[i] <= 'z') ++i;
  if (i == 0 || i == word.size()) return false;
  for (std::size_t k = i; k < word.size(); ++k) {
    if (word[k] < '0' || word[k] > '9') return false;
  }
  return true;
}

std::string expand_references(std::string_view text, const corpus::Sample& sample) {
  std::string out;
  out.reserve(text.size() * 2);
  std::size_t i = 0;
  while (i < text.size()) {
    if (text::is_space(text[i])) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t end = i;
    while (end < text.size() && !text::is_space(text[end])) ++end;
    std::string_view word = text.substr(i, end - i);
    std::size_t core_len = word.size();
    while (core_len > 0 && kTrailingPunct.find(word[core_len - 1]) != std::string_view::npos) {
      --core_len;
    }
    const std::string_view core = word.substr(0, core_len);
    if (is_object_reference(core)) {
      const auto box = sample.boxes.find(std::string(core));
      if (box == sample.boxes.end()) {
        throw ValidationError("sample '" + sample.id + "': no box for reference '" +
                              std::string(core) + "'");
      }
      out.append(core);
      out.push_back(' ');
      out += bbox_to_tokens(box->second, sample.image.width, sample.image.height);
      out.append(word.substr(core_len));
    } else {
      out.append(word);
    }
    i = end;
  }
  return out;
}

std::string gold_answer_text(const corpus::Sample& sample) {
  return std::visit(
      [](const auto& gold) -> std::string {
        using T = std::decay_t<decltype(gold)>;
        if constexpr (std::is_same_v<T, std::vector<corpus::AnswerCount>>) {
          if (gold.empty()) return {};
          auto best = std::max_element(
              gold.begin(), gold.end(),
              [](const auto& a, const auto& b) { return a.count < b.count; });
          return best->text;
        } else if constexpr (std::is_same_v<T, corpus::EntailmentLabel>) {
          return std::string(map_entailment_label(gold));
        } else {
          return "answer" + std::to_string(gold.value);
        }
      },
      sample.gold);
}

PromptText build_prompt(const corpus::Sample& sample) {
  PromptText out;
  std::string explanation = sample.gold_explanations.empty() ? std::string()
                                                             : sample.gold_explanations.front();
  switch (sample.dataset) {
    case corpus::DatasetId::kVqaX:
      out.prompt = sample.question_or_hypothesis;
      break;
    case corpus::DatasetId::kEsnliVe:
      out.prompt = "does the image describe \" " +
                   std::string(text::trim(sample.question_or_hypothesis)) + " \"?";
      break;
    case corpus::DatasetId::kVcr:
      out.prompt = expand_references(sample.question_or_hypothesis, sample);
      for (std::size_t k = 0; k < sample.choices.size(); ++k) {
        out.prompt += " answer" + std::to_string(k) + ": " +
                      expand_references(sample.choices[k], sample);
      }
      explanation = expand_references(explanation, sample);
      break;
  }
  out.target = gold_answer_text(sample);
  if (!explanation.empty()) out.target += std::string(kSeparator) + explanation;
  return out;
}

nlohmann::json to_json(const corpus::Sample& sample, const PromptText& prompt) {
  return {{"id", sample.id}, {"prompt", prompt.prompt}, {"target", prompt.target}};
}

}  // namespace evil::prompt
