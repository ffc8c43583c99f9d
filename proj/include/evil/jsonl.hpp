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
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace evil::jsonl {

// Reads one JSON document per non-blank line. Throws LoadError when the
// file cannot be opened and ParseError (with the zero-based record index)
// when a line is not valid JSON.
std::vector<nlohmann::json> read(const std::filesystem::path& path);

// Calls `fn(record, index)` for every record without materializing the file.
void for_each(const std::filesystem::path& path,
              const std::function<void(const nlohmann::json&, std::size_t)>& fn);

void write(const std::filesystem::path& path,
           const std::vector<nlohmann::json>& records);
void write(std::ostream& out, const std::vector<nlohmann::json>& records);

}  // namespace evil::jsonl
