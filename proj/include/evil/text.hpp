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

#include <string>
#include <string_view>
#include <vector>

namespace evil::text {

bool is_space(char c) noexcept;

std::string to_lower_ascii(std::string_view s);
std::string_view trim(std::string_view s) noexcept;

// Trims and replaces every internal whitespace run with a single space.
std::string collapse_whitespace(std::string_view s);

std::vector<std::string_view> split_whitespace(std::string_view s);

}  // namespace evil::text
