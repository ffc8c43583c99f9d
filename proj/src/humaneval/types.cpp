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

#include <set>

#include "evil/error.hpp"
#include "evil/humaneval.hpp"
#include "evil/jsonl.hpp"

namespace evil::humaneval {

using nlohmann::json;

namespace {

template <typename Enum, std::size_t N>
Enum lookup(std::string_view name, const std::array<Enum, N>& all, std::string_view what) {
  for (auto e : all) {
    if (to_string(e) == name) return e;
  }
  throw ValidationError("unknown " + std::string(what) + " '" + std::string(name) + "'");
}

constexpr std::array kAllPreferences{Preference::kPreferA, Preference::kPreferB,
                                     Preference::kEqual};
constexpr std::array kAllSources{Source::kModel, Source::kGroundTruth};

json shortcomings_to_json(ShortcomingSet set) {
  json out = json::array();
  for (auto s : kAllShortcomings) {
    if (set.contains(s)) out.push_back(to_string(s));
  }
  return out;
}

ShortcomingSet shortcomings_from_json(const json& j) {
  ShortcomingSet set;
  for (const auto& name : j) set.insert(parse_shortcoming(name.get<std::string>()));
  return set;
}

}  // namespace

std::string_view to_string(RatingLabel label) noexcept {
  switch (label) {
    case RatingLabel::kNo: return "no";
    case RatingLabel::kWeakNo: return "weak_no";
    case RatingLabel::kWeakYes: return "weak_yes";
    case RatingLabel::kYes: return "yes";
  }
  return "?";
}

RatingLabel parse_rating_label(std::string_view name) {
  return lookup(name, kAllRatingLabels, "rating");
}

std::string_view to_string(Shortcoming s) noexcept {
  switch (s) {
    case Shortcoming::kConfusingSentence: return "confusing_sentence";
    case Shortcoming::kInsufficientJustification: return "insufficient_justification";
    case Shortcoming::kIncorrectImageDescription: return "incorrect_image_description";
  }
  return "?";
}

Shortcoming parse_shortcoming(std::string_view name) {
  return lookup(name, kAllShortcomings, "shortcoming");
}

std::string_view to_string(Preference p) noexcept {
  switch (p) {
    case Preference::kPreferA: return "prefer_a";
    case Preference::kPreferB: return "prefer_b";
    case Preference::kEqual: return "equal";
  }
  return "?";
}

Preference parse_preference(std::string_view name) {
  return lookup(name, kAllPreferences, "preference");
}

std::string_view to_string(Source s) noexcept {
  return s == Source::kModel ? "model" : "ground_truth";
}

Source parse_source(std::string_view name) { return lookup(name, kAllSources, "source"); }

void validate(const EvalTask& t) {
  const std::string where = "task '" + t.task_id + "': ";
  if (t.task_id.empty()) throw ValidationError("task_id: must not be empty");
  if (t.sample_id.empty()) throw ValidationError(where + "sample_id: must not be empty");
  if (t.order[0] == t.order[1]) {
    throw ValidationError(where + "order: must hold one model and one ground-truth explanation");
  }
  if (t.correct_answer.empty()) throw ValidationError(where + "correct_answer: must not be empty");
}

json to_public_json(const EvalTask& t) {
  return {{"task_id", t.task_id},
          {"sample_id", t.sample_id},
          {"dataset", corpus::to_string(t.dataset)},
          {"image", {{"path", t.image.path}, {"width", t.image.width}, {"height", t.image.height}}},
          {"question", t.question},
          {"answer_options", t.answer_options},
          {"explanations", t.explanations}};
}

json to_json(const EvalTask& t) {
  json j = to_public_json(t);
  j["order"] = {to_string(t.order[0]), to_string(t.order[1])};
  j["correct_answer"] = t.correct_answer;
  return j;
}

EvalTask task_from_json(const json& j, std::size_t record_index) {
  EvalTask t;
  try {
    t.task_id = j.at("task_id").get<std::string>();
    t.sample_id = j.at("sample_id").get<std::string>();
    t.dataset = corpus::parse_dataset(j.at("dataset").get<std::string>());
    const auto& image = j.at("image");
    t.image.path = image.at("path").get<std::string>();
    t.image.width = image.value("width", 0);
    t.image.height = image.value("height", 0);
    t.question = j.at("question").get<std::string>();
    t.answer_options = j.value("answer_options", std::vector<std::string>{});
    const auto expl = j.at("explanations").get<std::vector<std::string>>();
    const auto order = j.at("order").get<std::vector<std::string>>();
    if (expl.size() != 2 || order.size() != 2) {
      throw ParseError(record_index, "explanations and order must have two entries");
    }
    t.explanations = {expl[0], expl[1]};
    t.order = {parse_source(order[0]), parse_source(order[1])};
    t.correct_answer = j.at("correct_answer").get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError(record_index, e.what());
  } catch (const ContractError& e) {
    throw ParseError(record_index, e.what());
  }
  return t;
}

std::vector<EvalTask> read_tasks(const std::filesystem::path& path) {
  std::vector<EvalTask> out;
  std::set<std::string> seen;
  jsonl::for_each(path, [&](const json& j, std::size_t index) {
    auto t = task_from_json(j, index);
    validate(t);
    if (!seen.insert(t.task_id).second) {
      throw ValidationError("duplicate task id '" + t.task_id + "' in " + path.string());
    }
    out.push_back(std::move(t));
  });
  return out;
}

void write_tasks(const std::filesystem::path& path, std::span<const EvalTask> tasks) {
  std::vector<json> lines;
  for (const auto& t : tasks) lines.push_back(to_json(t));
  jsonl::write(path, lines);
}

void validate(const RatingRecord& r) {
  if (r.task_id.empty()) throw ValidationError("task_id: must not be empty");
  if (r.annotator_id.empty()) throw ValidationError("annotator_id: must not be empty");
  for (std::size_t i = 0; i < r.ratings.size(); ++i) {
    const auto& rating = r.ratings[i];
    const std::string field = "ratings[" + std::to_string(i) + "].shortcomings";
    if (needs_shortcoming(rating.label) && rating.shortcomings.empty()) {
      throw ValidationError(field + ": a " + std::string(to_string(rating.label)) +
                            " rating must name at least one shortcoming");
    }
    if (!needs_shortcoming(rating.label) && !rating.shortcomings.empty()) {
      throw ValidationError(field + ": only no and weak_no ratings take shortcomings");
    }
  }
}

json to_json(const RatingRecord& r) {
  json ratings = json::array();
  for (const auto& x : r.ratings) {
    ratings.push_back({{"label", to_string(x.label)},
                       {"shortcomings", shortcomings_to_json(x.shortcomings)}});
  }
  return {{"task_id", r.task_id},
          {"annotator_id", r.annotator_id},
          {"annotator_task_answer", r.annotator_task_answer},
          {"ratings", std::move(ratings)},
          {"preference", to_string(r.preference)},
          {"timestamp", r.timestamp}};
}

RatingRecord record_from_json(const json& j, std::size_t record_index) {
  RatingRecord r;
  try {
    r.task_id = j.at("task_id").get<std::string>();
    r.annotator_id = j.at("annotator_id").get<std::string>();
    r.annotator_task_answer = j.at("annotator_task_answer").get<std::string>();
    const auto& ratings = j.at("ratings");
    if (!ratings.is_array() || ratings.size() != 2) {
      throw ParseError(record_index, "ratings: expected two entries (A, B)");
    }
    for (std::size_t i = 0; i < 2; ++i) {
      r.ratings[i].label = parse_rating_label(ratings[i].at("label").get<std::string>());
      r.ratings[i].shortcomings =
          shortcomings_from_json(ratings[i].value("shortcomings", json::array()));
    }
    r.preference = parse_preference(j.at("preference").get<std::string>());
    r.timestamp = j.value("timestamp", "");
  } catch (const json::exception& e) {
    throw ParseError(record_index, e.what());
  } catch (const ValidationError& e) {
    throw ParseError(record_index, e.what());
  }
  return r;
}

std::vector<RatingRecord> read_records(const std::filesystem::path& path) {
  std::vector<RatingRecord> out;
  jsonl::for_each(path, [&](const json& j, std::size_t index) {
    if (!j.contains("event")) {
      out.push_back(record_from_json(j, index));
    } else if (j["event"] == "rating") {
      out.push_back(record_from_json(j.at("record"), index));
    }
  });
  return out;
}

}  // namespace evil::humaneval
