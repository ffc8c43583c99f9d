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

#include "evil/parse.hpp"

#include <fstream>

#include "evil/error.hpp"
#include "evil/jsonl.hpp"
#include "evil/text.hpp"

namespace evil::parse {

namespace {

constexpr std::string_view kSeparatorWord = "because";

// Position of the first "because" bounded by whitespace or the string edges.
std::size_t find_separator(std::string_view s) noexcept {
  std::size_t pos = s.find(kSeparatorWord);
  while (pos != std::string_view::npos) {
    const std::size_t end = pos + kSeparatorWord.size();
    const bool left_ok = pos == 0 || text::is_space(s[pos - 1]);
    const bool right_ok = end == s.size() || text::is_space(s[end]);
    if (left_ok && right_ok) return pos;
    pos = s.find(kSeparatorWord, pos + 1);
  }
  return std::string_view::npos;
}

}  // namespace

std::string normalize_answer(std::string_view input) {
  std::string s = text::collapse_whitespace(text::to_lower_ascii(input));
  while (!s.empty()) {
    const char c = s.back();
    if (c == '.' || c == '?' || c == '!' || c == ',') {
      s.pop_back();
    } else if (c == ' ') {
      s.pop_back();
    } else {
      break;
    }
  }
  return s;
}

std::optional<int> vcr_answer_index(std::string_view answer) noexcept {
  constexpr std::string_view kPrefix = "answer";
  if (answer.size() != kPrefix.size() + 1 || answer.substr(0, kPrefix.size()) != kPrefix) {
    return std::nullopt;
  }
  const char d = answer.back();
  if (d < '0' || d > '3') return std::nullopt;
  return d - '0';
}

ParsedPrediction split_prediction(std::string sample_id, std::string raw) {
  ParsedPrediction p;
  p.sample_id = std::move(sample_id);
  const std::string_view view(raw);
  const std::size_t sep = find_separator(view);
  if (sep == std::string_view::npos) {
    p.answer = normalize_answer(view);
  } else {
    p.answer = normalize_answer(view.substr(0, sep));
    p.explanation = std::string(text::trim(view.substr(sep + kSeparatorWord.size())));
  }
  p.vcr_index = vcr_answer_index(p.answer);
  p.raw = std::move(raw);
  return p;
}

nlohmann::json to_json(const ParsedPrediction& p) {
  nlohmann::json j{{"sample_id", p.sample_id},
                   {"raw", p.raw},
                   {"answer", p.answer},
                   {"explanation", p.explanation}};
  j["vcr_index"] = p.vcr_index ? nlohmann::json(*p.vcr_index) : nlohmann::json(nullptr);
  return j;
}

ParsedPrediction parsed_from_json(const nlohmann::json& j, std::size_t record_index) {
  try {
    ParsedPrediction p;
    p.sample_id = j.at("sample_id").get<std::string>();
    p.raw = j.value("raw", std::string());
    p.answer = j.at("answer").get<std::string>();
    p.explanation = j.value("explanation", std::string());
    if (j.contains("vcr_index") && !j.at("vcr_index").is_null()) {
      p.vcr_index = j.at("vcr_index").get<int>();
    }
    if (p.vcr_index != vcr_answer_index(p.answer)) {
      throw ValidationError("prediction '" + p.sample_id +
                            "': vcr_index disagrees with answer '" + p.answer + "'");
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(record_index, e.what());
  }
}

std::vector<ParsedPrediction> parse_predictions_file(const std::filesystem::path& path) {
  std::vector<ParsedPrediction> out;
  jsonl::for_each(path, [&](const nlohmann::json& j, std::size_t index) {
    try {
      out.push_back(
          split_prediction(j.at("id").get<std::string>(), j.at("generation").get<std::string>()));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(index, path.string() + ": " + e.what());
    }
  });
  return out;
}

std::vector<ParsedPrediction> read_parsed(const std::filesystem::path& path) {
  std::vector<ParsedPrediction> out;
  jsonl::for_each(path, [&](const nlohmann::json& j, std::size_t index) {
    out.push_back(parsed_from_json(j, index));
  });
  return out;
}

void write_parsed(const std::filesystem::path& path, std::span<const ParsedPrediction> parsed) {
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write " + path.string());
  for (const auto& p : parsed) out << to_json(p).dump() << '\n';
  if (!out) throw LoadError("write failure on " + path.string());
}

}  // namespace evil::parse
