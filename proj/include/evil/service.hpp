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

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "evil/error.hpp"
#include "evil/humaneval.hpp"
#include "json.hpp"

namespace evil::service {

// The caller is not on the annotator allow-list (HTTP 403).
class AuthorizationError : public Error {
 public:
  explicit AuthorizationError(const std::string& what) : Error(what) {}
};

// The request clashes with stored state: a repeat submission or one
// without a live lease (HTTP 409).
class ConflictError : public Error {
 public:
  explicit ConflictError(const std::string& what) : Error(what) {}
};

using TimePoint = std::chrono::sys_time<std::chrono::milliseconds>;

class Clock {
 public:
  virtual ~Clock() = default;
  virtual TimePoint now() const = 0;
};

class SystemClock : public Clock {
 public:
  TimePoint now() const override;
};

// A clock that only moves when told to.
class ManualClock : public Clock {
 public:
  explicit ManualClock(TimePoint start = TimePoint{}) : now_(start) {}
  TimePoint now() const override;
  void advance(std::chrono::milliseconds by);

 private:
  mutable std::mutex mu_;
  TimePoint now_;
};

// Append-only JSON-lines file. Each append is a single write followed by
// fdatasync, so an acknowledged line survives a crash. Opening the log drops
// a torn final line left by an interrupted write.
class AppendLog {
 public:
  explicit AppendLog(const std::filesystem::path& path);  // LoadError
  ~AppendLog();
  AppendLog(const AppendLog&) = delete;
  AppendLog& operator=(const AppendLog&) = delete;

  void append(const nlohmann::json& line);  // LoadError when the write fails

  // Complete lines in order. A final line without its newline is ignored;
  // a malformed complete line raises ParseError. A missing file reads as empty.
  static std::vector<nlohmann::json> read(const std::filesystem::path& path);

 private:
  std::filesystem::path path_;
  int fd_ = -1;
};

struct TaskState {
  std::set<std::string> submitted;
  std::map<std::string, TimePoint> leases;  // annotator -> expiry

  friend bool operator==(const TaskState&, const TaskState&) = default;
};

using AssignmentState = std::map<std::string, TaskState>;

struct StoredRecord {
  humaneval::RatingRecord record;
  bool valid = false;

  friend bool operator==(const StoredRecord&, const StoredRecord&) = default;
};

inline constexpr std::chrono::minutes kDefaultLease{30};

// Task assignment and rating storage for one study. Every mutation is
// appended to the event log before it becomes visible; construction replays
// the log. Safe for concurrent use.
class CollectionStore {
 public:
  CollectionStore(std::vector<humaneval::EvalTask> tasks, std::set<std::string> annotators,
                  const std::filesystem::path& log_path, std::shared_ptr<const Clock> clock,
                  std::chrono::milliseconds lease = kDefaultLease);

  // The unsubmitted, unleased task with the fewest submissions plus live
  // leases, ties to the smaller task id; nullopt once none is left. Leases
  // the returned task. Throws AuthorizationError for unknown annotators.
  std::optional<humaneval::EvalTask> assign(const std::string& annotator);

  // Returns once the record is durable. Throws AuthorizationError,
  // ValidationError (unknown task or broken record) or ConflictError.
  void submit(const humaneval::RatingRecord& record);

  humaneval::HumanReport report() const;

  std::vector<StoredRecord> records() const;
  AssignmentState state() const;
  std::size_t task_count() const noexcept { return tasks_.size(); }
  const std::vector<humaneval::EvalTask>& tasks() const noexcept { return tasks_; }

 private:
  void apply(const nlohmann::json& event, std::size_t index);

  std::vector<humaneval::EvalTask> tasks_;
  std::map<std::string, std::size_t, std::less<>> task_index_;
  std::set<std::string, std::less<>> annotators_;
  std::shared_ptr<const Clock> clock_;
  std::chrono::milliseconds lease_;

  mutable std::shared_mutex mu_;
  AssignmentState state_;
  std::vector<StoredRecord> records_;
  std::unique_ptr<AppendLog> log_;
};

// Bearer token -> annotator id, from {"annotators": [{"id": ..., "token": ...}]}.
std::map<std::string, std::string> load_tokens(const std::filesystem::path& path);

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::size_t workers = 32;
};

// HTTP/1.1 front end:
//   GET  /api/health
//   GET  /api/tasks/next?annotator=<id>   200 task | 204
//   POST /api/ratings                     201 | 400 | 403 | 409 | 422
//   GET  /api/report
// Task and rating calls need "Authorization: Bearer <token>" matching the
// annotator they act for.
class HttpServer {
 public:
  HttpServer(CollectionStore& store, std::map<std::string, std::string> tokens);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and returns the port actually bound. Throws LoadError.
  int bind(const ServerOptions& options);
  void listen();  // blocks until stop()
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace evil::service
