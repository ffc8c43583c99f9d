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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace evil::parse {

struct ParsedPrediction {
  std::string sample_id;
  std::string raw;
  std::string answer;       // normalized
  std::string explanation;  // trimmed, possibly empty
  std::optional<int> vcr_index;

  // A generation with nothing usable before the separator.
  bool malformed() const noexcept { return answer.empty(); }

  friend bool operator==(const ParsedPrediction&, const ParsedPrediction&) = default;
};

// Lower-cases, trims, collapses whitespace and strips trailing . ? ! ,
std::string normalize_answer(std::string_view text);

// Exact "answer0".."answer3" -> 0..3.
std::optional<int> vcr_answer_index(std::string_view answer) noexcept;

// Splits at the first whitespace-bounded "because". Never throws.
ParsedPrediction split_prediction(std::string sample_id, std::string raw);

nlohmann::json to_json(const ParsedPrediction& p);
ParsedPrediction parsed_from_json(const nlohmann::json& j, std::size_t record_index = 0);

// Raw model output file: JSON-lines {id, generation}.
std::vector<ParsedPrediction> parse_predictions_file(const std::filesystem::path& path);
std::vector<ParsedPrediction> read_parsed(const std::filesystem::path& path);
void write_parsed(const std::filesystem::path& path, std::span<const ParsedPrediction> parsed);

}  // namespace evil::parse
