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
#include <fstream>

#include "evil/service.hpp"

namespace evil::service {

using humaneval::EvalTask;
using humaneval::RatingRecord;
using nlohmann::json;

TimePoint SystemClock::now() const {
  return std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now());
}

TimePoint ManualClock::now() const {
  std::lock_guard lock(mu_);
  return now_;
}

void ManualClock::advance(std::chrono::milliseconds by) {
  std::lock_guard lock(mu_);
  now_ += by;
}

CollectionStore::CollectionStore(std::vector<EvalTask> tasks, std::set<std::string> annotators,
                                 const std::filesystem::path& log_path,
                                 std::shared_ptr<const Clock> clock,
                                 std::chrono::milliseconds lease)
    : tasks_(std::move(tasks)),
      annotators_(annotators.begin(), annotators.end()),
      clock_(std::move(clock)),
      lease_(lease) {
  if (!clock_) throw ContractError("collection store needs a clock");
  if (lease_ <= std::chrono::milliseconds::zero()) {
    throw ContractError("lease duration must be positive");
  }
  std::sort(tasks_.begin(), tasks_.end(),
            [](const EvalTask& a, const EvalTask& b) { return a.task_id < b.task_id; });
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    humaneval::validate(tasks_[i]);
    if (!task_index_.emplace(tasks_[i].task_id, i).second) {
      throw ValidationError("duplicate task id '" + tasks_[i].task_id + "'");
    }
    state_[tasks_[i].task_id];
  }
  const auto events = AppendLog::read(log_path);
  for (std::size_t i = 0; i < events.size(); ++i) apply(events[i], i);
  log_ = std::make_unique<AppendLog>(log_path);
}

void CollectionStore::apply(const json& event, std::size_t index) {
  try {
    const auto kind = event.at("event").get<std::string>();
    if (kind == "lease") {
      const auto task = event.at("task_id").get<std::string>();
      auto it = state_.find(task);
      if (it == state_.end()) throw ParseError(index, "lease for unknown task '" + task + "'");
      it->second.leases[event.at("annotator_id").get<std::string>()] =
          TimePoint(std::chrono::milliseconds(event.at("expires_at").get<std::int64_t>()));
    } else if (kind == "rating") {
      StoredRecord stored{humaneval::record_from_json(event.at("record"), index),
                          event.at("valid").get<bool>()};
      auto it = state_.find(stored.record.task_id);
      if (it == state_.end()) {
        throw ParseError(index, "rating for unknown task '" + stored.record.task_id + "'");
      }
      it->second.submitted.insert(stored.record.annotator_id);
      it->second.leases.erase(stored.record.annotator_id);
      records_.push_back(std::move(stored));
    } else {
      throw ParseError(index, "unknown event '" + kind + "'");
    }
  } catch (const json::exception& e) {
    throw ParseError(index, std::string("malformed event: ") + e.what());
  }
}

std::optional<EvalTask> CollectionStore::assign(const std::string& annotator) {
  if (!annotators_.contains(annotator)) {
    throw AuthorizationError("annotator '" + annotator + "' is not on the allow-list");
  }
  std::unique_lock lock(mu_);
  const auto now = clock_->now();
  const EvalTask* best = nullptr;
  std::size_t best_load = 0;
  for (const auto& task : tasks_) {
    const auto& st = state_.at(task.task_id);
    if (st.submitted.contains(annotator)) continue;
    std::size_t live = 0;
    bool mine = false;
    for (const auto& [who, expiry] : st.leases) {
      if (expiry <= now) continue;
      ++live;
      mine = mine || who == annotator;
    }
    if (mine) continue;
    const std::size_t load = st.submitted.size() + live;
    if (best == nullptr || load < best_load) {
      best = &task;
      best_load = load;
    }
  }
  if (best == nullptr) return std::nullopt;
  const auto expiry = now + lease_;
  log_->append({{"event", "lease"},
                {"task_id", best->task_id},
                {"annotator_id", annotator},
                {"expires_at", expiry.time_since_epoch().count()}});
  state_.at(best->task_id).leases[annotator] = expiry;
  return *best;
}

void CollectionStore::submit(const RatingRecord& record) {
  if (!annotators_.contains(record.annotator_id)) {
    throw AuthorizationError("annotator '" + record.annotator_id + "' is not on the allow-list");
  }
  auto idx = task_index_.find(record.task_id);
  if (idx == task_index_.end()) {
    throw ValidationError("task_id: unknown task '" + record.task_id + "'");
  }
  std::unique_lock lock(mu_);
  auto& st = state_.at(record.task_id);
  if (st.submitted.contains(record.annotator_id)) {
    throw ConflictError("annotator '" + record.annotator_id + "' already rated task '" +
                        record.task_id + "'");
  }
  auto lease = st.leases.find(record.annotator_id);
  if (lease == st.leases.end() || lease->second <= clock_->now()) {
    throw ConflictError("annotator '" + record.annotator_id + "' holds no live lease on task '" +
                        record.task_id + "'");
  }
  humaneval::validate(record);
  const bool valid = humaneval::record_valid(record, tasks_[idx->second]);
  log_->append({{"event", "rating"}, {"record", humaneval::to_json(record)}, {"valid", valid}});
  st.submitted.insert(record.annotator_id);
  st.leases.erase(lease);
  records_.push_back({record, valid});
}

humaneval::HumanReport CollectionStore::report() const {
  std::vector<RatingRecord> snapshot;
  {
    std::shared_lock lock(mu_);
    snapshot.reserve(records_.size());
    for (const auto& r : records_) snapshot.push_back(r.record);
  }
  return humaneval::aggregate(snapshot, tasks_);
}

std::vector<StoredRecord> CollectionStore::records() const {
  std::shared_lock lock(mu_);
  return records_;
}

AssignmentState CollectionStore::state() const {
  std::shared_lock lock(mu_);
  return state_;
}

std::map<std::string, std::string> load_tokens(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open token file " + path.string());
  std::map<std::string, std::string> out;
  try {
    const auto doc = json::parse(in);
    for (const auto& a : doc.at("annotators")) {
      auto token = a.at("token").get<std::string>();
      auto id = a.at("id").get<std::string>();
      if (token.empty() || id.empty()) {
        throw ValidationError("token file " + path.string() + ": empty id or token");
      }
      if (!out.emplace(std::move(token), std::move(id)).second) {
        throw ValidationError("token file " + path.string() + ": duplicate token");
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(0, "token file " + path.string() + ": " + e.what());
  }
  return out;
}

}  // namespace evil::service
