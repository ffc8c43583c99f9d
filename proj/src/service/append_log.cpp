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

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "evil/service.hpp"

namespace evil::service {

namespace {

std::string errno_text() { return std::strerror(errno); }

// Drops a trailing partial line so later appends start on a fresh line.
void truncate_torn_tail(const std::filesystem::path& path) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec || size == 0) return;
  std::ifstream in(path, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (content.back() == '\n') return;
  const auto last = content.rfind('\n');
  const auto keep = last == std::string::npos ? 0 : last + 1;
  std::filesystem::resize_file(path, keep, ec);
  if (ec) throw LoadError("cannot repair torn log tail in " + path.string() + ": " + ec.message());
}

}  // namespace

AppendLog::AppendLog(const std::filesystem::path& path) : path_(path) {
  truncate_torn_tail(path_);
  fd_ = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw LoadError("cannot open log " + path_.string() + ": " + errno_text());
}

AppendLog::~AppendLog() {
  if (fd_ >= 0) ::close(fd_);
}

void AppendLog::append(const nlohmann::json& line) {
  const std::string data = line.dump() + '\n';
  std::size_t written = 0;
  while (written < data.size()) {
    const auto n = ::write(fd_, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw LoadError("write to " + path_.string() + " failed: " + errno_text());
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fdatasync(fd_) != 0) {
    throw LoadError("fdatasync on " + path_.string() + " failed: " + errno_text());
  }
}

std::vector<nlohmann::json> AppendLog::read(const std::filesystem::path& path) {
  std::vector<nlohmann::json> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t start = 0;
  std::size_t index = 0;
  while (start < content.size()) {
    const auto end = content.find('\n', start);
    if (end == std::string::npos) break;  // torn tail
    const std::string_view line(content.data() + start, end - start);
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(index, path.string() + ": " + e.what());
    }
    ++index;
  }
  return out;
}

}  // namespace evil::service
