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
#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include "doctest.h"
#include "evil/corpus.hpp"
#include "evil/error.hpp"
#include "evil/metrics/evaluate.hpp"
#include "evil/metrics/porter.hpp"
#include "httplib.h"
#include "test_support.hpp"

using namespace evil;
using namespace evil::metrics;
using evil::testing::load_json;

namespace {

TokenSeq toks(std::string_view s) { return split_tokens(s); }

std::vector<CandidateRefs> oracle_pairs(const nlohmann::json& fixture) {
  std::vector<CandidateRefs> pairs;
  for (const auto& p : fixture["pairs"]) {
    CandidateRefs cr;
    cr.candidate = tokenize(p["candidate"].get<std::string>());
    for (const auto& r : p["references"]) cr.references.push_back(tokenize(r.get<std::string>()));
    pairs.push_back(std::move(cr));
  }
  return pairs;
}

TokenSeq random_tokens(std::mt19937_64& rng, std::size_t max_len, int vocab) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> word(0, vocab - 1);
  TokenSeq out(len(rng));
  for (auto& t : out) t = "w" + std::to_string(word(rng));
  return out;
}

parse::ParsedPrediction prediction(std::string id, std::string answer, std::string explanation) {
  parse::ParsedPrediction p;
  p.sample_id = std::move(id);
  p.answer = std::move(answer);
  p.explanation = std::move(explanation);
  p.raw = p.answer + " because " + p.explanation;
  return p;
}

corpus::Sample esnli_sample(std::string id, corpus::EntailmentLabel label,
                            std::vector<std::string> explanations) {
  corpus::Sample s;
  s.id = std::move(id);
  s.dataset = corpus::DatasetId::kEsnliVe;
  s.split = corpus::Split::kTest;
  s.image.path = "img.jpg";
  s.question_or_hypothesis = "a hypothesis";
  s.gold = label;
  s.gold_explanations = std::move(explanations);
  return s;
}

// Synthetic e-SNLI-VE set where the first `correct` of `n` predictions are
// right. Explanations overlap their references only partially.
void synthetic_set(std::size_t n, std::size_t correct, std::vector<parse::ParsedPrediction>& preds,
                   std::vector<corpus::Sample>& gold) {
  std::mt19937_64 rng(n * 31 + correct);
  static const std::vector<std::string> words = {"the", "dog", "runs", "in", "snow", "a",
                                                 "man", "holds", "red", "ball", "near", "tree"};
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  auto sentence = [&](std::size_t len) {
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += (i ? " " : "") + words[pick(rng)];
    return s;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = "s" + std::to_string(i);
    const std::string ref = sentence(8);
    gold.push_back(esnli_sample(id, corpus::EntailmentLabel::kEntailment, {ref, sentence(6)}));
    const std::string expl = ref.substr(0, ref.size() / 2) + " " + sentence(4);
    preds.push_back(prediction(id, i < correct ? "yes" : "no", expl));
  }
}

void check_values_close(const MetricValues& a, const MetricValues& b, double tol = 1e-9) {
  for (int k = 0; k < kMaxOrder; ++k) CHECK(a.bleu[k] == doctest::Approx(b.bleu[k]).epsilon(tol));
  CHECK(a.rouge_l == doctest::Approx(b.rouge_l).epsilon(tol));
  CHECK(a.meteor == doctest::Approx(b.meteor).epsilon(tol));
  CHECK(a.cider == doctest::Approx(b.cider).epsilon(tol));
}

class FixedProvider : public EmbeddingProvider {
 public:
  // Each distinct token gets its own one-hot axis, so equal words are
  // identical vectors and different words are orthogonal.
  std::vector<TokenEmbeddings> embed(std::span<const std::string> texts) override {
    std::vector<TokenEmbeddings> out;
    for (const auto& t : texts) {
      TokenEmbeddings e;
      for (const auto& w : tokenize(t)) {
        auto [it, inserted] = axes_.emplace(w, axes_.size());
        std::vector<float> v(64, 0.0f);
        v[it->second % 64] = 1.0f;
        e.push_back(std::move(v));
      }
      out.push_back(std::move(e));
    }
    return out;
  }
  std::string model() const override { return "one-hot"; }

 private:
  std::map<std::string, std::size_t> axes_;
};

class FailingProvider : public EmbeddingProvider {
 public:
  std::vector<TokenEmbeddings> embed(std::span<const std::string>) override {
    throw ProviderError("embedding service offline");
  }
  std::string model() const override { return "none"; }
};

}  // namespace

TEST_CASE("tokenize lower-cases and splits punctuation") {
  CHECK(tokenize("The sky is blue.") == TokenSeq{"the", "sky", "is", "blue", "."});
  CHECK(tokenize("").empty());
  CHECK(tokenize("a  b") == TokenSeq{"a", "b"});
  CHECK(tokenize("don't,stop") == TokenSeq{"don", "'", "t", ",", "stop"});
  CHECK(tokenize(" \t\n ").empty());
}

TEST_CASE("tokenize never yields empty tokens") {
  std::mt19937_64 rng(7);
  const std::string alphabet = "abcXYZ .,!? \t'";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  for (int trial = 0; trial < 1000; ++trial) {
    std::string s(rng() % 30, ' ');
    for (auto& c : s) c = alphabet[pick(rng)];
    for (const auto& t : tokenize(s)) {
      REQUIRE_FALSE(t.empty());
      for (char c : t) REQUIRE_FALSE((c >= 'A' && c <= 'Z'));
    }
  }
}

TEST_CASE("ngram profile sizes") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto t = random_tokens(rng, 12, 4);
    const auto p = NgramProfile::of(t);
    for (int n = 1; n <= kMaxOrder; ++n) {
      long total = 0;
      for (const auto& [g, c] : p.counts[n - 1]) total += c;
      REQUIRE(total == std::max<long>(static_cast<long>(t.size()) - n + 1, 0));
    }
  }
}

TEST_CASE("document frequencies stay within 1..N") {
  std::mt19937_64 rng(13);
  std::vector<std::vector<NgramProfile>> sets(40);
  for (auto& refs : sets) {
    for (int r = 0; r < 3; ++r) refs.push_back(NgramProfile::of(random_tokens(rng, 8, 6)));
  }
  const auto df = DocFreqTable::build(sets);
  CHECK(df.corpus_size() == 40);
  for (const auto& refs : sets) {
    for (const auto& ref : refs) {
      for (const auto& order : ref.counts) {
        for (const auto& [g, c] : order) {
          REQUIRE(df.df(g) >= 1);
          REQUIRE(df.df(g) <= 40);
        }
      }
    }
  }
  CHECK(df.df("never seen") == 0);
}

TEST_CASE("bleu examples") {
  SUBCASE("perfect match") {
    std::vector<CandidateRefs> c{{toks("a man rides a horse"), {toks("a man rides a horse")}}};
    for (double b : bleu_corpus(c)) CHECK(b == doctest::Approx(1.0));
  }
  SUBCASE("brevity penalty") {
    std::vector<CandidateRefs> c{{toks("the cat sat"), {toks("the cat sat down")}}};
    CHECK(bleu_corpus(c)[0] == doctest::Approx(std::exp(1.0 - 4.0 / 3.0)));
    CHECK(bleu_corpus(c)[0] == doctest::Approx(0.7165).epsilon(1e-4));
  }
  SUBCASE("no overlap") {
    std::vector<CandidateRefs> c{{toks("red green blue yellow"), {toks("one two three four")}}};
    for (double b : bleu_corpus(c)) CHECK(b == 0.0);
  }
  SUBCASE("empty corpus") { CHECK_THROWS_AS(bleu_corpus({}), ContractError); }
  SUBCASE("closest reference length prefers the shorter one on ties") {
    const std::vector<TokenSeq> refs{toks("a b c d e f"), toks("a b")};
    CHECK(bleu_stats(toks("a b c d"), refs).reference_length == 2.0);
  }
  SUBCASE("clipping against the maximum reference count") {
    const std::vector<TokenSeq> refs{toks("the the cat"), toks("the cat")};
    CHECK(bleu_stats(toks("the the the"), refs).matches[0] == 2.0);
  }
}

TEST_CASE("rouge-l examples") {
  const std::vector<TokenSeq> same{toks("a b c")};
  CHECK(rouge_l(toks("a b c"), same) == doctest::Approx(1.0));
  const std::vector<TokenSeq> swapped{toks("a c b")};
  CHECK(rouge_l(toks("a b c"), swapped) == doctest::Approx(2.0 / 3.0));
  const std::vector<TokenSeq> disjoint{toks("x y")};
  CHECK(rouge_l(toks("a b"), disjoint) == 0.0);
  CHECK(rouge_l({}, same) == 0.0);
  const std::vector<TokenSeq> with_empty{TokenSeq{}};
  CHECK(rouge_l(toks("a"), with_empty) == 0.0);

  // Best precision and best recall come from different references here.
  const std::vector<TokenSeq> split{toks("a"), toks("a b c d e f g h")};
  const auto cand = toks("a b");
  const double best_pr = rouge_l(cand, split, RougeAggregation::kBestPrecisionRecall);
  const double max_f = rouge_l(cand, split, RougeAggregation::kMaxF);
  CHECK(best_pr > max_f);
}

TEST_CASE("meteor examples") {
  const std::vector<TokenSeq> same{toks("the cat sat")};
  CHECK(meteor(toks("the cat sat"), same) ==
        doctest::Approx(1.0 - 0.5 * std::pow(1.0 / 3.0, 3)).epsilon(1e-12));
  CHECK(meteor(toks("the cat sat"), same) == doctest::Approx(0.9815).epsilon(1e-4));
  const std::vector<TokenSeq> other{toks("dogs bark loudly")};
  CHECK(meteor(toks("the cat sat"), other) == 0.0);
  CHECK(meteor({}, same) == 0.0);
  CHECK(meteor(toks("a"), {}) == 0.0);

  SUBCASE("stem stage matches inflections") {
    const std::vector<TokenSeq> refs{toks("the dog runs")};
    MeteorConfig exact_only;
    exact_only.stem_stage = false;
    CHECK(align(toks("the dogs running"), refs[0]).matches == 3);
    CHECK(align(toks("the dogs running"), refs[0], exact_only).matches == 1);
  }
  SUBCASE("synonym stage uses the lexical resource") {
    struct Lexicon : SynonymSource {
      std::vector<std::string> synonyms(std::string_view w) const override {
        if (w == "hound") return {"dog", "canine_animal"};
        return {};
      }
    } lexicon;
    MeteorConfig config;
    config.synonyms = &lexicon;
    CHECK(align(toks("the hound"), toks("the dog"), config).matches == 2);
    CHECK(align(toks("the hound"), toks("the dog")).matches == 1);
  }
  SUBCASE("chunks") {
    const auto a = align(toks("a b c d"), toks("c d a b"));
    CHECK(a.matches == 4);
    CHECK(a.chunks == 2);
  }
}

TEST_CASE("porter stemmer matches the reference word list") {
  const auto words = load_json("fixtures/porter_words.json");
  REQUIRE(words.size() > 200);
  for (const auto& [word, stem] : words.items()) {
    INFO(word);
    CHECK(porter_stem(word) == stem.get<std::string>());
  }
  CHECK(porter_stem("Caresses") == "caress");
}

TEST_CASE("cider-d examples") {
  SUBCASE("single pair scores zero") {
    std::vector<CandidateRefs> c{{toks("a red car parked"), {toks("a red car parked")}}};
    const auto r = cider_d(c);
    CHECK(r.per_sample.at(0) == 0.0);
    CHECK(r.mean == 0.0);
  }
  SUBCASE("two exact pairs score ten each") {
    std::vector<CandidateRefs> c{{toks("a red car parked"), {toks("a red car parked")}},
                                 {toks("a blue bus stopped"), {toks("a blue bus stopped")}}};
    const auto r = cider_d(c);
    CHECK(r.per_sample[0] == doctest::Approx(10.0));
    CHECK(r.per_sample[1] == doctest::Approx(10.0));
  }
  SUBCASE("disjoint candidate") {
    std::vector<CandidateRefs> c{{toks("zebra violin"), {toks("a red car parked")}},
                                 {toks("a blue bus stopped"), {toks("a blue bus stopped")}}};
    CHECK(cider_d(c).per_sample[0] == 0.0);
  }
  SUBCASE("empty corpus") { CHECK_THROWS_AS(cider_d({}), ContractError); }
}

TEST_CASE("metrics match the reference implementations on the frozen corpus") {
  const auto fixture = load_json("fixtures/metric_oracle.json");
  const auto pairs = oracle_pairs(fixture);
  REQUIRE(pairs.size() >= 100);
  const double tol = 1e-4;

  const auto start = std::chrono::steady_clock::now();
  const auto bleu = bleu_corpus(pairs);
  const auto cider = cider_d(pairs);
  double rouge_sum = 0, meteor_sum = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& expected = fixture["pairs"][i];
    INFO("pair " << i << ": " << expected["candidate"].get<std::string>());
    const double r = rouge_l(pairs[i].candidate, pairs[i].references);
    const double rf = rouge_l(pairs[i].candidate, pairs[i].references, RougeAggregation::kMaxF);
    const double m = meteor(pairs[i].candidate, pairs[i].references);
    CHECK(std::abs(r - expected["rouge_l"].get<double>()) <= tol);
    CHECK(std::abs(rf - expected["rouge_l_max_f"].get<double>()) <= tol);
    CHECK(std::abs(m - expected["meteor"].get<double>()) <= tol);
    CHECK(std::abs(cider.per_sample[i] - expected["cider"].get<double>()) <= tol);
    rouge_sum += r;
    meteor_sum += m;
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;
  const auto& corpus = fixture["corpus"];
  for (int k = 0; k < kMaxOrder; ++k) {
    CHECK(std::abs(bleu[k] - corpus["bleu"][k].get<double>()) <= tol);
  }
  CHECK(std::abs(rouge_sum / pairs.size() - corpus["rouge_l"].get<double>()) <= tol);
  CHECK(std::abs(meteor_sum / pairs.size() - corpus["meteor"].get<double>()) <= tol);
  CHECK(std::abs(cider.mean - corpus["cider"].get<double>()) <= tol);
  CHECK(elapsed < std::chrono::seconds(1));
}

TEST_CASE("metric bounds and perfect-match maxima") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto cand = random_tokens(rng, 10, 5);
    std::vector<TokenSeq> refs;
    for (int r = 0; r < 1 + static_cast<int>(rng() % 3); ++r) refs.push_back(random_tokens(rng, 10, 5));
    std::vector<CandidateRefs> corpus{{cand, refs}, {random_tokens(rng, 6, 5), refs}};
    for (double b : bleu_corpus(corpus)) REQUIRE((b >= 0 && b <= 1 + 1e-12));
    const double r = rouge_l(cand, refs);
    REQUIRE((r >= 0 && r <= 1 + 1e-12));
    const double m = meteor(cand, refs);
    REQUIRE((m >= 0 && m <= 1 + 1e-12));
    for (double c : cider_d(corpus).per_sample) REQUIRE((c >= 0 && c <= 10 + 1e-9));

    if (!cand.empty()) {
      const std::vector<TokenSeq> self{cand};
      std::vector<CandidateRefs> perfect{{cand, self}};
      const auto b = bleu_corpus(perfect);
      for (std::size_t n = 1; n <= std::min<std::size_t>(cand.size(), 4); ++n) {
        REQUIRE(b[n - 1] == doctest::Approx(1.0));
      }
      REQUIRE(rouge_l(cand, self) == doctest::Approx(1.0));

      // Appending a token that appears in no reference to a perfect
      // candidate never raises B1.
      auto longer = cand;
      longer.push_back("unmatched");
      std::vector<CandidateRefs> probe{{longer, self}};
      REQUIRE(bleu_corpus(probe)[0] <= b[0] + 1e-12);
    }
  }
}

TEST_CASE("corpus metrics do not depend on sample order") {
  const auto fixture = load_json("fixtures/metric_oracle.json");
  auto pairs = oracle_pairs(fixture);
  const auto bleu = bleu_corpus(pairs);
  const double cider = cider_d(pairs).mean;
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(pairs.begin(), pairs.end(), rng);
    const auto b = bleu_corpus(pairs);
    for (int k = 0; k < kMaxOrder; ++k) CHECK(b[k] == doctest::Approx(bleu[k]).epsilon(1e-12));
    CHECK(cider_d(pairs).mean == doctest::Approx(cider).epsilon(1e-12));
  }
}

TEST_CASE("bertscore") {
  FixedProvider provider;
  const std::vector<std::string> same{"a dog runs in snow"};
  CHECK(bert_score("a dog runs in snow", same, provider) == doctest::Approx(1.0));
  const std::vector<std::string> disjoint{"violin quartz"};
  CHECK(bert_score("a dog runs", disjoint, provider) == doctest::Approx(0.0));
  CHECK(bert_score_f1({}, {{1.0f}}) == 0.0);

  SUBCASE("sidecar provider") {
    evil::testing::TempDir dir("evil-bert");
    const auto path = dir / "emb.json";
    std::ofstream(path) << R"({"model":"distilbert-base-uncased","embeddings":{
      "x":[[1,0],[0,1]], "y":[[1,0]]}})";
    SidecarEmbeddingProvider sidecar(path);
    CHECK(sidecar.model() == "distilbert-base-uncased");
    const std::vector<std::string> refs{"y"};
    // P = 1/2 (only one of x's tokens matches), R = 1.
    CHECK(bert_score("x", refs, sidecar) == doctest::Approx(2.0 / 3.0));
    const std::vector<std::string> missing{"z"};
    CHECK_THROWS_AS(bert_score("x", missing, sidecar), ProviderError);
    CHECK_THROWS_AS(SidecarEmbeddingProvider(dir / "absent.json"), LoadError);
  }

  SUBCASE("http provider") {
    httplib::Server server;
    server.Post("/embed", [](const httplib::Request& req, httplib::Response& res) {
      const auto body = nlohmann::json::parse(req.body);
      nlohmann::json out = nlohmann::json::array();
      for (const auto& t : body["texts"]) {
        nlohmann::json vecs = nlohmann::json::array();
        for (std::size_t i = 0; i < t.get<std::string>().size(); ++i) vecs.push_back({1.0, 0.0});
        out.push_back(vecs);
      }
      res.set_content(nlohmann::json{{"embeddings", out}}.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    auto remote = make_embedding_provider("http://127.0.0.1:" + std::to_string(port) + "/embed");
    const std::vector<std::string> refs{"abc"};
    CHECK(bert_score("ab", refs, *remote) == doctest::Approx(1.0));
    auto wrong_path = make_embedding_provider("http://127.0.0.1:" + std::to_string(port) + "/nope");
    CHECK_THROWS_AS(bert_score("ab", refs, *wrong_path), ProviderError);
    server.stop();
    t.join();
  }
}

TEST_CASE("mode names") {
  for (auto m : kAllModes) CHECK(parse_mode(to_string(m)) == m);
  CHECK_THROWS_AS(parse_mode("bogus"), ContractError);
}

TEST_CASE("all predictions correct: the three modes coincide") {
  std::vector<parse::ParsedPrediction> preds;
  std::vector<corpus::Sample> gold;
  synthetic_set(40, 40, preds, gold);
  MetricEngine engine(preds, gold);
  const auto f = engine.report(Mode::kFiltered);
  const auto u = engine.report(Mode::kUnfiltered);
  const auto s = engine.report(Mode::kScaled);
  CHECK(f.accuracy == 100.0);
  REQUIRE(f.values);
  REQUIRE(u.values);
  REQUIRE(s.values);
  check_values_close(*f.values, *u.values);
  check_values_close(*s.values, *u.values);
  CHECK(f.counts.evaluated == 40);
}

TEST_CASE("all predictions wrong: scaled is zero and filtered is empty") {
  std::vector<parse::ParsedPrediction> preds;
  std::vector<corpus::Sample> gold;
  synthetic_set(40, 0, preds, gold);
  MetricEngine engine(preds, gold);
  const auto f = engine.report(Mode::kFiltered);
  CHECK(f.counts.evaluated == 0);
  CHECK(f.counts.excluded == 40);
  CHECK_FALSE(f.values.has_value());
  CHECK(to_json(f)["metrics"].is_null());
  const auto s = engine.report(Mode::kScaled);
  REQUIRE(s.values);
  for (double b : s.values->bleu) CHECK(b == 0.0);
  CHECK(s.values->rouge_l == 0.0);
  CHECK(s.values->meteor == 0.0);
  CHECK(s.values->cider == 0.0);
  REQUIRE(engine.report(Mode::kUnfiltered).values);
  CHECK(engine.report(Mode::kUnfiltered).values->bleu[0] > 0.0);
}

TEST_CASE("half correct: scaled never exceeds unfiltered") {
  for (std::size_t n : {2u, 10u, 50u}) {
    std::vector<parse::ParsedPrediction> preds;
    std::vector<corpus::Sample> gold;
    synthetic_set(n, n / 2, preds, gold);
    MetricEngine engine(preds, gold);
    const auto u = *engine.report(Mode::kUnfiltered).values;
    const auto s = *engine.report(Mode::kScaled).values;
    CHECK(engine.report(Mode::kUnfiltered).accuracy == 50.0);
    CHECK(engine.report(Mode::kFiltered).counts.evaluated == n / 2);
    for (int k = 0; k < kMaxOrder; ++k) CHECK(s.bleu[k] <= u.bleu[k] + 1e-9);
    CHECK(s.rouge_l <= u.rouge_l + 1e-9);
    CHECK(s.meteor <= u.meteor + 1e-9);
    CHECK(s.cider <= u.cider + 1e-9);
  }
}

TEST_CASE("mixed six-sample report matches the golden file") {
  const auto gold = corpus::read_samples(evil::testing::data_path("fixtures/gold6.jsonl"));
  const auto preds = parse::read_parsed(evil::testing::data_path("fixtures/preds6.jsonl"));
  const auto golden = load_json("fixtures/report6_golden.json");
  MetricEngine engine(preds, gold, {.threads = 3});
  for (auto mode : kAllModes) {
    const auto name = std::string(to_string(mode));
    INFO(name);
    const auto report = engine.report(mode);
    auto j = to_json(report);
    CHECK(j["unavailable"].contains("spice"));
    CHECK_FALSE(j["metrics"].contains("bertscore"));
    j.erase("unavailable");
    CHECK(j == golden[name]["report"]);
    const auto& raw = golden[name]["raw"];
    REQUIRE(report.values);
    for (int k = 0; k < kMaxOrder; ++k) {
      CHECK(report.values->bleu[k] ==
            doctest::Approx(raw["bleu" + std::to_string(k + 1)].get<double>()).epsilon(1e-9));
    }
    CHECK(report.values->rouge_l == doctest::Approx(raw["rouge_l"].get<double>()).epsilon(1e-9));
    CHECK(report.values->meteor == doctest::Approx(raw["meteor"].get<double>()).epsilon(1e-9));
    CHECK(report.values->cider == doctest::Approx(raw["cider"].get<double>()).epsilon(1e-9));
  }
}

TEST_CASE("evaluate errors and bertscore availability") {
  std::vector<parse::ParsedPrediction> preds;
  std::vector<corpus::Sample> gold;
  synthetic_set(4, 2, preds, gold);

  auto stray = preds;
  stray.push_back(prediction("ghost", "yes", "nothing"));
  CHECK_THROWS_AS(evaluate(stray, gold, Mode::kUnfiltered), JoinError);
  CHECK_THROWS_AS(evaluate({}, gold, Mode::kUnfiltered), ContractError);

  const auto none = evaluate(preds, gold, Mode::kUnfiltered);
  CHECK_FALSE(none.values->bert_score.has_value());
  CHECK_FALSE(none.bert_score_unavailable.has_value());
  CHECK_FALSE(to_json(none)["unavailable"].contains("bertscore"));

  FixedProvider provider;
  const auto with = evaluate(preds, gold, Mode::kUnfiltered, {.embeddings = &provider});
  REQUIRE(with.values->bert_score.has_value());
  CHECK(*with.values->bert_score > 0.0);
  CHECK(*with.values->bert_score <= 100.0);
  CHECK(to_json(with)["metrics"].contains("bertscore"));

  FailingProvider failing;
  const auto failed = evaluate(preds, gold, Mode::kUnfiltered, {.embeddings = &failing});
  CHECK_FALSE(failed.values->bert_score.has_value());
  REQUIRE(failed.bert_score_unavailable.has_value());
  CHECK(to_json(failed)["unavailable"]["bertscore"] == "embedding service offline");
  CHECK(format_table(failed).find("embedding service offline") != std::string::npos);
}

TEST_CASE("bin tokens are stripped before scoring") {
  std::vector<corpus::Sample> gold{esnli_sample("a", corpus::EntailmentLabel::kEntailment,
                                                {"person1 is next to person2 ."}),
                                   esnli_sample("b", corpus::EntailmentLabel::kEntailment,
                                                {"a cat sleeps on the mat"})};
  std::vector<parse::ParsedPrediction> preds{
      prediction("a", "yes", "person1 <bin_1> <bin_2> <bin_3> <bin_4> is next to person2 ."),
      prediction("b", "yes", "a cat sleeps on the mat")};
  const auto r = evaluate(preds, gold, Mode::kUnfiltered);
  CHECK(r.values->bleu[3] == doctest::Approx(100.0));
  CHECK(r.values->rouge_l == doctest::Approx(100.0));
}

TEST_CASE("parallel and sequential passes agree") {
  std::vector<parse::ParsedPrediction> preds;
  std::vector<corpus::Sample> gold;
  synthetic_set(600, 400, preds, gold);
  const MetricEngine seq(preds, gold, {.threads = 1});
  const MetricEngine par(preds, gold, {.threads = 8});
  for (auto mode : kAllModes) {
    check_values_close(*seq.report(mode).values, *par.report(mode).values, 1e-12);
  }
}

TEST_CASE("pretty table") {
  std::vector<parse::ParsedPrediction> preds;
  std::vector<corpus::Sample> gold;
  synthetic_set(4, 4, preds, gold);
  const auto table = format_table(evaluate(preds, gold, Mode::kFiltered));
  CHECK(table.find("BLEU-4") != std::string::npos);
  CHECK(table.find("CIDEr") != std::string::npos);
  CHECK(table.find("SPICE") != std::string::npos);
  CHECK(table.find("accuracy   100.0") != std::string::npos);
}
