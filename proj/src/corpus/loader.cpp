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
#include <set>

#include "evil/corpus.hpp"
#include "evil/error.hpp"
#include "evil/jsonl.hpp"

namespace evil::corpus {

std::filesystem::path dataset_file(const std::filesystem::path& root, DatasetId dataset,
                                   Split split) {
  return root / std::string(to_string(dataset)) / (std::string(to_string(split)) + ".jsonl");
}

std::vector<Sample> read_samples(const std::filesystem::path& path) {
  std::vector<Sample> samples;
  std::set<std::tuple<DatasetId, Split, std::string>> seen;
  jsonl::for_each(path, [&](const nlohmann::json& record, std::size_t index) {
    Sample s = sample_from_json(record, index);
    validate(s);
    if (!seen.emplace(s.dataset, s.split, s.id).second) {
      throw ValidationError("sample '" + s.id + "': duplicate id in " +
                            std::string(to_string(s.dataset)) + "/" +
                            std::string(to_string(s.split)));
    }
    samples.push_back(std::move(s));
  });
  return samples;
}

void write_samples(const std::filesystem::path& path, std::span<const Sample> samples) {
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write " + path.string());
  for (const auto& s : samples) out << to_json(s).dump() << '\n';
  if (!out) throw LoadError("write failure on " + path.string());
}

std::vector<Sample> load_dataset(DatasetId dataset, Split split,
                                 const std::filesystem::path& root) {
  const auto path = dataset_file(root, dataset, split);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw LoadError("missing annotation file " + path.string());
  }
  auto samples = read_samples(path);
  for (const auto& s : samples) {
    if (s.dataset != dataset || s.split != split) {
      throw ValidationError("sample '" + s.id + "': found " +
                            std::string(to_string(s.dataset)) + "/" +
                            std::string(to_string(s.split)) + " record in " + path.string());
    }
  }
  std::sort(samples.begin(), samples.end(),
            [](const Sample& a, const Sample& b) { return a.id < b.id; });
  return samples;
}

}  // namespace evil::corpus
