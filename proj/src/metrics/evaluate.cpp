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
#include <sstream>
#include <thread>

#include "evil/metrics/evaluate.hpp"
#include "evil/prompt.hpp"
#include "evil/text.hpp"

namespace evil::metrics {

namespace {

using nlohmann::json;

struct Prepared {
  TokenSeq candidate;
  std::vector<TokenSeq> references;
  NgramProfile candidate_profile;
  std::vector<NgramProfile> reference_profiles;
};

// Runs fn(i) for i in [0, n) across worker threads.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, (n + 63) / 64));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < n; i += threads) fn(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double round1(double v) { return std::round(v * 10.0) / 10.0; }

}  // namespace

std::string_view to_string(Mode mode) noexcept {
  switch (mode) {
    case Mode::kFiltered:
      return "filtered";
    case Mode::kUnfiltered:
      return "unfiltered";
    case Mode::kScaled:
      return "scaled";
  }
  return "unknown";
}

Mode parse_mode(std::string_view name) {
  for (auto m : kAllModes) {
    if (to_string(m) == name) return m;
  }
  throw ContractError("unknown metric mode '" + std::string(name) +
                      "' (expected filtered, unfiltered or scaled)");
}

MetricEngine::MetricEngine(std::span<const parse::ParsedPrediction> predictions,
                           std::span<const corpus::Sample> gold, const EvaluateOptions& options) {
  const auto joined = scoring::join(predictions, gold);
  if (joined.empty()) throw ContractError("evaluate: no predictions");

  const std::size_t n = joined.size();
  std::vector<Prepared> prepared(n);
  samples_.resize(n);
  parallel_for(n, options.threads, [&](std::size_t i) {
    const auto& [pred, sample] = joined[i];
    auto& p = prepared[i];
    p.candidate = tokenize(prompt::strip_bbox_tokens(pred->explanation));
    p.candidate_profile = NgramProfile::of(p.candidate);
    for (const auto& ref : sample->gold_explanations) {
      p.references.push_back(tokenize(prompt::strip_bbox_tokens(ref)));
      p.reference_profiles.push_back(NgramProfile::of(p.references.back()));
    }
    auto& s = samples_[i];
    s.id = pred->sample_id;
    s.score = scoring::score_sample(*pred, *sample);
    s.malformed = pred->malformed();
  });

  std::vector<std::vector<NgramProfile>> reference_sets;
  reference_sets.reserve(n);
  for (const auto& p : prepared) reference_sets.push_back(p.reference_profiles);
  const CiderD cider(DocFreqTable::build(reference_sets));

  parallel_for(n, options.threads, [&](std::size_t i) {
    const auto& p = prepared[i];
    auto& s = samples_[i];
    s.bleu = bleu_stats(p.candidate, p.references);
    s.rouge_l = rouge_l(p.candidate, p.references, options.rouge);
    s.meteor = meteor(p.candidate, p.references, options.meteor);
    s.cider = cider.score(p.candidate_profile, p.reference_profiles);
  });

  if (options.embeddings != nullptr) {
    // One batched request: the candidate text then the reference texts of
    // each sample in turn.
    std::vector<std::string> texts;
    std::vector<std::size_t> offsets;
    for (const auto& [pred, sample] : joined) {
      offsets.push_back(texts.size());
      texts.push_back(std::string(text::trim(prompt::strip_bbox_tokens(pred->explanation))));
      for (const auto& ref : sample->gold_explanations) {
        texts.push_back(std::string(text::trim(prompt::strip_bbox_tokens(ref))));
      }
    }
    try {
      auto emb = options.embeddings->embed(texts);
      if (emb.size() != texts.size()) {
        throw ProviderError("provider returned " + std::to_string(emb.size()) +
                            " entries for " + std::to_string(texts.size()) + " texts");
      }
      for (std::size_t i = 0; i < n; ++i) {
        const auto refs = joined[i].gold->gold_explanations.size();
        samples_[i].bert_score =
            bert_score(emb[offsets[i]], std::span(emb).subspan(offsets[i] + 1, refs));
      }
      has_bert_score_ = true;
    } catch (const std::exception& e) {
      for (auto& s : samples_) s.bert_score.reset();
      bert_score_unavailable_ = e.what();
    }
  }

  std::vector<scoring::TaskScore> scores;
  scores.reserve(n);
  for (const auto& s : samples_) scores.push_back(s.score);
  accuracy_ = scoring::accuracy(scores);
}

MetricReport MetricEngine::report(Mode mode) const {
  MetricReport r;
  r.mode = mode;
  r.accuracy = accuracy_;
  r.bert_score_unavailable = bert_score_unavailable_;
  r.counts.total = samples_.size();
  for (const auto& s : samples_) {
    if (s.malformed) ++r.counts.malformed;
  }

  BleuStats bleu;
  MetricValues sums;
  double bert_sum = 0;
  std::size_t used = 0;
  for (const auto& s : samples_) {
    if (mode == Mode::kFiltered && !s.score.correct()) continue;
    const double w = mode == Mode::kScaled ? s.score.value() : 1.0;
    ++used;
    bleu += mode == Mode::kScaled ? s.bleu.with_weighted_matches(w) : s.bleu;
    sums.rouge_l += w * s.rouge_l;
    sums.meteor += w * s.meteor;
    sums.cider += w * s.cider;
    if (s.bert_score) bert_sum += w * *s.bert_score;
  }
  r.counts.evaluated = used;
  r.counts.excluded = r.counts.total - used;
  if (used == 0) return r;

  MetricValues v;
  const auto b = bleu_from_stats(bleu);
  for (int k = 0; k < kMaxOrder; ++k) v.bleu[k] = 100.0 * b[k];
  const double denom = static_cast<double>(used);
  v.rouge_l = 100.0 * sums.rouge_l / denom;
  v.meteor = 100.0 * sums.meteor / denom;
  v.cider = 100.0 * sums.cider / denom;
  if (has_bert_score_) v.bert_score = 100.0 * bert_sum / denom;
  r.values = v;
  return r;
}

MetricReport evaluate(std::span<const parse::ParsedPrediction> predictions,
                      std::span<const corpus::Sample> gold, Mode mode,
                      const EvaluateOptions& options) {
  return MetricEngine(predictions, gold, options).report(mode);
}

json to_json(const MetricReport& r) {
  json j;
  j["mode"] = to_string(r.mode);
  j["accuracy"] = r.accuracy;
  j["counts"] = {{"total", r.counts.total},
                 {"evaluated", r.counts.evaluated},
                 {"excluded", r.counts.excluded},
                 {"malformed", r.counts.malformed}};
  if (r.values) {
    const auto& v = *r.values;
    json m = {{"bleu1", round1(v.bleu[0])}, {"bleu2", round1(v.bleu[1])},
              {"bleu3", round1(v.bleu[2])}, {"bleu4", round1(v.bleu[3])},
              {"rouge_l", round1(v.rouge_l)}, {"meteor", round1(v.meteor)},
              {"cider", round1(v.cider)}};
    if (v.bert_score) m["bertscore"] = round1(*v.bert_score);
    j["metrics"] = std::move(m);
  } else {
    j["metrics"] = nullptr;
  }
  json unavailable = {{"spice", kSpiceAbsentReason}};
  if (r.bert_score_unavailable) unavailable["bertscore"] = *r.bert_score_unavailable;
  j["unavailable"] = std::move(unavailable);
  return j;
}

std::string format_table(const MetricReport& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(1);
  out << "mode       " << to_string(r.mode) << '\n';
  out << "accuracy   " << r.accuracy << '\n';
  out << "samples    " << r.counts.total << " total, " << r.counts.evaluated << " evaluated, "
      << r.counts.excluded << " excluded, " << r.counts.malformed << " malformed\n\n";
  auto row = [&](std::string_view name, std::optional<double> value, std::string_view note = {}) {
    out << std::left << std::setw(11) << name;
    if (value) {
      out << std::right << std::setw(6) << round1(*value);
    } else {
      out << std::right << std::setw(6) << "-";
    }
    if (!note.empty()) out << "  (" << note << ')';
    out << '\n';
  };
  const auto* v = r.values ? &*r.values : nullptr;
  for (int k = 0; k < kMaxOrder; ++k) {
    row("BLEU-" + std::to_string(k + 1), v ? std::optional(v->bleu[k]) : std::nullopt);
  }
  row("ROUGE-L", v ? std::optional(v->rouge_l) : std::nullopt);
  row("METEOR", v ? std::optional(v->meteor) : std::nullopt);
  row("CIDEr", v ? std::optional(v->cider) : std::nullopt);
  row("SPICE", std::nullopt, kSpiceAbsentReason);
  if (r.bert_score_unavailable) {
    row("BERTScore", std::nullopt, *r.bert_score_unavailable);
  } else if (v && v->bert_score) {
    row("BERTScore", v->bert_score);
  }
  return out.str();
}

}  // namespace evil::metrics
