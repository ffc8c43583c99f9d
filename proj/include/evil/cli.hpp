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

#include <iosfwd>
#include <span>
#include <string>

namespace evil::cli {

// Runs one `evil` invocation. `args` excludes the program name. Data goes to
// `out` (or to files named by --out), diagnostics to `err`.
//
// Exit codes: 0 success, 1 usage, validation or contract errors, 2 I/O
// errors.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace evil::cli
