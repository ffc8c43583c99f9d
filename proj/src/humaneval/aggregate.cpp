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
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "evil/humaneval.hpp"

namespace evil::humaneval {

using nlohmann::json;

namespace {

struct SourceAccumulator {
  std::size_t rated = 0;
  int thirds = 0;
  std::array<std::size_t, 3> shortcomings{};

  void add(RatingLabel label, ShortcomingSet set) {
    ++rated;
    thirds += rating_thirds(label);
    for (std::size_t i = 0; i < kAllShortcomings.size(); ++i) {
      if (set.contains(kAllShortcomings[i])) ++shortcomings[i];
    }
  }

  SourceSummary summary() const {
    SourceSummary s;
    s.rated = rated;
    if (rated == 0) return s;
    const auto n = static_cast<double>(rated);
    s.mean_rating = 100.0 * thirds / (3.0 * n);
    std::array<double, 3> pct{};
    for (std::size_t i = 0; i < pct.size(); ++i) pct[i] = 100.0 * shortcomings[i] / n;
    s.shortcoming_percent = pct;
    return s;
  }
};

std::optional<double> mean_x100(const std::vector<RatingLabel>& labels) {
  if (labels.empty()) return std::nullopt;
  int thirds = 0;
  for (auto l : labels) thirds += rating_thirds(l);
  return 100.0 * thirds / (3.0 * static_cast<double>(labels.size()));
}

json rounded(std::optional<double> v) {
  if (!v) return nullptr;
  return std::round(*v * 10.0) / 10.0;
}

json labels_json(const std::vector<RatingLabel>& labels) {
  json out = json::array();
  for (auto l : labels) out.push_back(to_string(l));
  return out;
}

json source_json(const SourceSummary& s) {
  json j{{"rated", s.rated}, {"mean_rating", rounded(s.mean_rating)}};
  if (s.shortcoming_percent) {
    json pct;
    for (std::size_t i = 0; i < kAllShortcomings.size(); ++i) {
      pct[std::string(to_string(kAllShortcomings[i]))] = rounded((*s.shortcoming_percent)[i]);
    }
    j["shortcomings"] = std::move(pct);
  } else {
    j["shortcomings"] = nullptr;
  }
  return j;
}

}  // namespace

HumanReport aggregate(std::span<const RatingRecord> records, std::span<const EvalTask> tasks) {
  std::map<std::string_view, const EvalTask*> by_id;
  for (const auto& t : tasks) by_id.emplace(t.task_id, &t);

  struct PerTask {
    std::size_t valid = 0;
    std::size_t invalid = 0;
    std::vector<std::pair<std::string_view, UnblindedRating>> ratings;
  };
  std::map<std::string_view, PerTask> per_task;
  for (const auto& t : tasks) per_task[t.task_id];

  HumanReport report;
  SourceAccumulator model, truth;
  std::array<std::size_t, 3> prefs{};  // model, none, ground truth
  std::set<std::pair<std::string_view, std::string_view>> seen;

  for (const auto& r : records) {
    auto it = by_id.find(r.task_id);
    if (it == by_id.end()) {
      ++report.invalid;
      continue;
    }
    auto& slot = per_task[it->first];
    if (!record_valid(r, *it->second) || !seen.emplace(it->first, r.annotator_id).second) {
      ++report.invalid;
      ++slot.invalid;
      continue;
    }
    ++report.valid;
    ++slot.valid;
    const auto u = unblind(r, *it->second);
    model.add(u.model, u.model_shortcomings);
    truth.add(u.ground_truth, u.ground_truth_shortcomings);
    if (!u.preferred) {
      ++prefs[1];
    } else {
      ++prefs[*u.preferred == Source::kModel ? 0 : 2];
    }
    slot.ratings.emplace_back(r.annotator_id, u);
  }

  report.model = model.summary();
  report.ground_truth = truth.summary();
  if (report.valid > 0) {
    const auto n = static_cast<double>(report.valid);
    report.preference = PreferenceSummary{100.0 * prefs[0] / n, 100.0 * prefs[1] / n,
                                          100.0 * prefs[2] / n};
  }

  for (auto& [id, slot] : per_task) {
    std::sort(slot.ratings.begin(), slot.ratings.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    TaskSummary t;
    t.task_id = std::string(id);
    t.valid = slot.valid;
    t.invalid = slot.invalid;
    t.under_quorum = slot.valid < kQuorum;
    for (const auto& [annotator, u] : slot.ratings) {
      t.model_ratings.push_back(u.model);
      t.ground_truth_ratings.push_back(u.ground_truth);
    }
    t.model_mean = mean_x100(t.model_ratings);
    t.ground_truth_mean = mean_x100(t.ground_truth_ratings);
    if (t.under_quorum) report.under_quorum.push_back(t.task_id);
    report.tasks.push_back(std::move(t));
  }
  return report;
}

json to_json(const HumanReport& r) {
  json j;
  j["records"] = {{"valid", r.valid}, {"invalid", r.invalid}};
  j["quorum"] = kQuorum;
  j["sources"] = {{"model", source_json(r.model)}, {"ground_truth", source_json(r.ground_truth)}};
  if (r.preference) {
    j["preference"] = {{"model", rounded(r.preference->model)},
                       {"no_preference", rounded(r.preference->no_preference)},
                       {"ground_truth", rounded(r.preference->ground_truth)}};
  } else {
    j["preference"] = nullptr;
  }
  json tasks = json::array();
  for (const auto& t : r.tasks) {
    tasks.push_back({{"task_id", t.task_id},
                     {"valid", t.valid},
                     {"invalid", t.invalid},
                     {"under_quorum", t.under_quorum},
                     {"model_ratings", labels_json(t.model_ratings)},
                     {"ground_truth_ratings", labels_json(t.ground_truth_ratings)},
                     {"model_mean", rounded(t.model_mean)},
                     {"ground_truth_mean", rounded(t.ground_truth_mean)}});
  }
  j["tasks"] = std::move(tasks);
  j["under_quorum"] = r.under_quorum;
  return j;
}

std::string format_table(const HumanReport& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(1);
  auto cell = [&](std::optional<double> v) {
    if (v) {
      out << std::setw(14) << std::round(*v * 10.0) / 10.0;
    } else {
      out << std::setw(14) << "-";
    }
  };
  out << "records      " << r.valid << " valid, " << r.invalid << " invalid\n\n";
  out << std::left << std::setw(30) << "" << std::right << std::setw(14) << "model"
      << std::setw(14) << "ground truth" << '\n';
  out << std::left << std::setw(30) << "mean rating" << std::right;
  cell(r.model.mean_rating);
  cell(r.ground_truth.mean_rating);
  out << '\n';
  for (std::size_t i = 0; i < kAllShortcomings.size(); ++i) {
    out << std::left << std::setw(30) << to_string(kAllShortcomings[i]) << std::right;
    cell(r.model.shortcoming_percent ? std::optional((*r.model.shortcoming_percent)[i])
                                     : std::nullopt);
    cell(r.ground_truth.shortcoming_percent
             ? std::optional((*r.ground_truth.shortcoming_percent)[i])
             : std::nullopt);
    out << '\n';
  }
  out << "\npreference   ";
  if (r.preference) {
    out << "model " << r.preference->model << "  no preference " << r.preference->no_preference
        << "  ground truth " << r.preference->ground_truth << '\n';
  } else {
    out << "-\n";
  }
  out << "tasks        " << r.tasks.size() << " (" << r.under_quorum.size()
      << " below the quorum of " << kQuorum << ")\n";
  return out.str();
}

}  // namespace evil::humaneval
