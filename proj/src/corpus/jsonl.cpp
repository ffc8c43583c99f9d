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

#include "evil/jsonl.hpp"

#include <fstream>

#include "evil/error.hpp"
#include "evil/text.hpp"

namespace evil::jsonl {

void for_each(const std::filesystem::path& path,
              const std::function<void(const nlohmann::json&, std::size_t)>& fn) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string());
  std::string line;
  std::size_t index = 0;
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(index, path.string() + ": " + e.what());
    }
    fn(record, index);
    ++index;
  }
  if (in.bad()) throw LoadError("read failure on " + path.string());
}

std::vector<nlohmann::json> read(const std::filesystem::path& path) {
  std::vector<nlohmann::json> out;
  for_each(path, [&](const nlohmann::json& j, std::size_t) { out.push_back(j); });
  return out;
}

void write(std::ostream& out, const std::vector<nlohmann::json>& records) {
  for (const auto& r : records) out << r.dump() << '\n';
}

void write(const std::filesystem::path& path,
           const std::vector<nlohmann::json>& records) {
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write " + path.string());
  write(out, records);
  if (!out) throw LoadError("write failure on " + path.string());
}

}  // namespace evil::jsonl
