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
#include <map>
#include <set>
#include <sstream>

#include "evil/corpus.hpp"
#include "evil/error.hpp"
#include "evil/jsonl.hpp"
#include "evil/text.hpp"

namespace evil::corpus {

namespace {

using nlohmann::json;

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

std::string canonical_answer(std::string_view raw) {
  return text::collapse_whitespace(text::to_lower_ascii(raw));
}

void sort_by_id(std::vector<Sample>& samples) {
  std::sort(samples.begin(), samples.end(),
            [](const Sample& a, const Sample& b) { return a.id < b.id; });
}

// RFC 4180 reader: quoted fields may contain commas, doubled quotes and
// newlines.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string data = buffer.str();

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool row_has_content = false;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const char c = data[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        row_has_content = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        row_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        if (row_has_content || !field.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        row.clear();
        field.clear();
        row_has_content = false;
        break;
      default:
        field.push_back(c);
        row_has_content = true;
    }
  }
  if (quoted) throw ParseError(rows.size(), path.string() + ": unterminated quoted field");
  if (row_has_content || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

// VCR mixes plain words with lists of object indices; punctuation tokens
// attach to the preceding word.
std::string render_vcr_tokens(const json& tokens, const std::vector<std::string>& labels) {
  std::string out;
  auto append_word = [&](const std::string& w) {
    const bool punct = w.size() == 1 && std::string_view(".,?!;:'").find(w[0]) != std::string_view::npos;
    if (!out.empty() && !punct) out.push_back(' ');
    out += w;
  };
  for (const auto& tok : tokens) {
    if (tok.is_string()) {
      append_word(tok.get<std::string>());
      continue;
    }
    std::vector<std::string> refs;
    for (const auto& idx : tok) {
      const auto i = idx.get<std::size_t>();
      if (i >= labels.size()) throw ValidationError("object index " + std::to_string(i) + " out of range");
      refs.push_back(labels[i]);
    }
    for (std::size_t k = 0; k < refs.size(); ++k) {
      if (k > 0) append_word(k + 1 == refs.size() ? "and" : ",");
      append_word(refs[k]);
    }
  }
  return out;
}

std::vector<std::string> vcr_labels(const json& objects) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    std::string name;
    for (char c : text::to_lower_ascii(objects[i].get<std::string>())) {
      if (c >= 'a' && c <= 'z') name.push_back(c);
    }
    if (name.empty()) name = "object";
    labels.push_back(name + std::to_string(i + 1));
  }
  return labels;
}

}  // namespace

std::vector<Sample> convert_vqax(const std::filesystem::path& release_json, Split split) {
  const json root = read_json_file(release_json);
  if (!root.is_object()) throw ParseError(0, release_json.string() + ": expected an object keyed by question id");
  std::vector<Sample> samples;
  std::size_t index = 0;
  for (const auto& [qid, rec] : root.items()) {
    try {
      Sample s;
      s.id = qid;
      s.dataset = DatasetId::kVqaX;
      s.split = split;
      s.image.path = rec.at("image_name").get<std::string>();
      s.image.width = rec.value("width", 0);
      s.image.height = rec.value("height", 0);
      s.question_or_hypothesis = rec.at("question").get<std::string>();
      std::vector<AnswerCount> answers;
      for (const auto& a : rec.at("answers")) {
        const auto text = canonical_answer(a.at("answer").get<std::string>());
        auto it = std::find_if(answers.begin(), answers.end(),
                               [&](const AnswerCount& x) { return x.text == text; });
        if (it == answers.end()) {
          answers.push_back({text, 1});
        } else {
          ++it->count;
        }
      }
      s.gold = std::move(answers);
      const auto& expl = rec.at("explanation");
      if (expl.is_string()) {
        s.gold_explanations.push_back(expl.get<std::string>());
      } else {
        s.gold_explanations = expl.get<std::vector<std::string>>();
      }
      validate(s);
      samples.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw ParseError(index, release_json.string() + ": " + e.what());
    }
    ++index;
  }
  sort_by_id(samples);
  return samples;
}

std::vector<Sample> convert_esnlive(const std::filesystem::path& release_csv, Split split) {
  const auto rows = read_csv(release_csv);
  if (rows.empty()) throw ParseError(0, release_csv.string() + ": missing header row");
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < rows[0].size(); ++i) column[std::string(text::trim(rows[0][i]))] = i;
  for (const char* name : {"pairID", "Flickr30kID", "hypothesis", "gold_label", "explanation"}) {
    if (!column.count(name)) {
      throw ParseError(0, release_csv.string() + ": missing column '" + name + "'");
    }
  }
  auto cell = [&](const std::vector<std::string>& row, const char* name, std::size_t index) {
    const auto c = column.at(name);
    if (c >= row.size()) throw ParseError(index, release_csv.string() + ": short row");
    return row[c];
  };

  std::map<std::string, Sample> by_pair;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t index = r - 1;
    const auto pair_id = std::string(text::trim(cell(row, "pairID", index)));
    auto [it, inserted] = by_pair.try_emplace(pair_id);
    Sample& s = it->second;
    if (inserted) {
      s.id = pair_id;
      s.dataset = DatasetId::kEsnliVe;
      s.split = split;
      s.image.path = std::string(text::trim(cell(row, "Flickr30kID", index)));
      s.question_or_hypothesis = std::string(text::trim(cell(row, "hypothesis", index)));
      const auto label = std::string(text::trim(cell(row, "gold_label", index)));
      try {
        s.gold = parse_entailment_label(label);
      } catch (const ValidationError& e) {
        throw ValidationError("sample '" + pair_id + "': " + e.what());
      }
    }
    const auto expl = std::string(text::trim(cell(row, "explanation", index)));
    if (!expl.empty()) s.gold_explanations.push_back(expl);
  }
  std::vector<Sample> samples;
  samples.reserve(by_pair.size());
  for (auto& [id, s] : by_pair) {
    validate(s);
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<Sample> convert_vcr(const std::filesystem::path& release_jsonl,
                                const std::filesystem::path& split_manifest, Split split,
                                const std::filesystem::path& metadata_root) {
  const json manifest = read_json_file(split_manifest);
  const std::string key(to_string(split));
  if (!manifest.contains(key)) {
    throw ParseError(0, split_manifest.string() + ": no '" + key + "' entry");
  }
  std::set<std::string> wanted;
  for (const auto& id : manifest.at(key)) wanted.insert(id.get<std::string>());

  std::vector<Sample> samples;
  jsonl::for_each(release_jsonl, [&](const json& rec, std::size_t index) {
    try {
      const auto annot_id = rec.at("annot_id").get<std::string>();
      if (!wanted.count(annot_id)) return;

      json meta = rec;
      if (!rec.contains("boxes")) {
        meta = read_json_file(metadata_root / rec.at("metadata_fn").get<std::string>());
      }
      const auto labels = vcr_labels(rec.at("objects"));

      Sample s;
      s.id = annot_id;
      s.dataset = DatasetId::kVcr;
      s.split = split;
      s.image.path = rec.at("img_fn").get<std::string>();
      s.image.width = meta.at("width").get<int>();
      s.image.height = meta.at("height").get<int>();
      s.question_or_hypothesis = render_vcr_tokens(rec.at("question"), labels);
      for (const auto& choice : rec.at("answer_choices")) {
        s.choices.push_back(render_vcr_tokens(choice, labels));
      }
      s.gold = ChoiceIndex{rec.at("answer_label").get<int>()};
      if (rec.contains("explanation")) {
        s.gold_explanations.push_back(rec.at("explanation").get<std::string>());
      } else {
        const auto& rationales = rec.at("rationale_choices");
        const auto r = rec.at("rationale_label").get<std::size_t>();
        s.gold_explanations.push_back(render_vcr_tokens(rationales.at(r), labels));
      }
      const auto& boxes = meta.at("boxes");
      for (std::size_t i = 0; i < labels.size() && i < boxes.size(); ++i) {
        const auto& b = boxes[i];
        auto clamp = [](double v, double hi) { return std::clamp(v, 0.0, hi); };
        const double w = s.image.width;
        const double h = s.image.height;
        BoundingBox box{clamp(b.at(0).get<double>(), w), clamp(b.at(1).get<double>(), h),
                        clamp(b.at(2).get<double>(), w), clamp(b.at(3).get<double>(), h),
                        labels[i]};
        s.boxes.emplace(labels[i], std::move(box));
      }
      validate(s);
      samples.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw ParseError(index, release_jsonl.string() + ": " + e.what());
    }
  });
  sort_by_id(samples);
  return samples;
}

}  // namespace evil::corpus
