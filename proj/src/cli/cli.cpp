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

#include "evil/cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "evil/corpus.hpp"
#include "evil/error.hpp"
#include "evil/humaneval.hpp"
#include "evil/jsonl.hpp"
#include "evil/metrics/bertscore.hpp"
#include "evil/metrics/evaluate.hpp"
#include "evil/parse.hpp"
#include "evil/prompt.hpp"
#include "evil/scoring.hpp"
#include "evil/service.hpp"

namespace evil::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Accepts exactly the names the corpus module parses.
template <auto Parse>
CLI::Validator parsed_by(std::string description, bool allow_combined = false) {
  return CLI::Validator(
      [allow_combined](std::string& value) -> std::string {
        if (allow_combined && value == "combined") return {};
        try {
          Parse(value);
          return {};
        } catch (const Error& e) {
          return e.what();
        }
      },
      std::move(description));
}

struct Options {
  std::string dataset;
  std::string split;
  fs::path root;
  fs::path in;
  fs::path out;
  fs::path manifest;
  fs::path metadata_root;
  fs::path preds;
  fs::path gold;
  fs::path tasks;
  fs::path records;
  fs::path tokens;
  fs::path log;
  std::string mode;
  std::string bertscore_provider;
  std::string rouge = "best-pr";
  std::optional<double> threshold;
  std::size_t n = 300;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string host = "127.0.0.1";
  int port = 8080;
  int lease_minutes = 30;
  bool pretty = false;
};

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

std::string thousands(std::int64_t count) {
  const int tenths = corpus::to_tenths_of_thousand(count);
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10) + "k";
}

std::vector<corpus::Sample> load_split(const Options& o) {
  const auto split = corpus::parse_split(o.split);
  if (o.dataset != "combined") return corpus::load_dataset(corpus::parse_dataset(o.dataset), split, o.root);
  std::vector<std::vector<corpus::Sample>> parts;
  for (auto d : corpus::kAllDatasets) parts.push_back(corpus::load_dataset(d, split, o.root));
  return corpus::build_combined(parts);
}

void corpus_stats(const Options& o, std::ostream& out) {
  const auto samples = load_split(o);
  const auto st = corpus::stats(samples);
  if (!o.pretty) {
    emit(out, corpus::to_json(st));
    return;
  }
  const auto split = corpus::parse_split(o.split);
  out << std::left << std::setw(10) << "dataset" << std::right << std::setw(10) << o.split
      << std::setw(10) << "" << '\n';
  for (auto d : corpus::kAllDatasets) {
    const auto n = st.count(d, split);
    out << std::left << std::setw(10) << corpus::to_string(d) << std::right << std::setw(10) << n
        << std::setw(10) << thousands(n) << '\n';
  }
  out << std::left << std::setw(10) << "total" << std::right << std::setw(10) << st.total()
      << std::setw(10) << thousands(st.total()) << '\n';
}

void corpus_convert(const Options& o, std::ostream& out) {
  const auto dataset = corpus::parse_dataset(o.dataset);
  const auto split = corpus::parse_split(o.split);
  std::vector<corpus::Sample> samples;
  switch (dataset) {
    case corpus::DatasetId::kVqaX:
      samples = corpus::convert_vqax(o.in, split);
      break;
    case corpus::DatasetId::kEsnliVe:
      samples = corpus::convert_esnlive(o.in, split);
      break;
    case corpus::DatasetId::kVcr:
      if (o.manifest.empty()) throw ContractError("vcr conversion needs --manifest");
      samples = corpus::convert_vcr(o.in, o.manifest, split,
                                    o.metadata_root.empty() ? o.in.parent_path() : o.metadata_root);
      break;
  }
  corpus::write_samples(o.out, samples);
  emit(out, {{"written", samples.size()}, {"out", o.out.string()}});
}

void prompts_build(const Options& o, std::ostream& out) {
  const auto samples = load_split(o);
  std::vector<json> lines;
  lines.reserve(samples.size());
  for (const auto& s : samples) lines.push_back(prompt::to_json(s, prompt::build_prompt(s)));
  jsonl::write(o.out, lines);
  emit(out, {{"written", lines.size()}, {"out", o.out.string()}});
}

void parse_cmd(const Options& o, std::ostream& out) {
  const auto parsed = parse::parse_predictions_file(o.in);
  parse::write_parsed(o.out, parsed);
  const auto malformed =
      std::count_if(parsed.begin(), parsed.end(), [](const auto& p) { return p.malformed(); });
  emit(out, {{"records", parsed.size()}, {"malformed", malformed}, {"out", o.out.string()}});
}

void score_cmd(const Options& o, std::ostream& out) {
  const auto preds = parse::read_parsed(o.preds);
  const auto gold = corpus::read_samples(o.gold);
  std::vector<scoring::TaskScore> scores;
  std::vector<json> lines;
  for (const auto& j : scoring::join(preds, gold)) {
    auto s = scoring::score_sample(*j.prediction, *j.gold);
    if (o.threshold) s = scoring::apply_threshold(s, *o.threshold);
    scores.push_back(s);
    lines.push_back({{"id", j.prediction->sample_id}, {"score", s.value()}, {"correct", s.correct()}});
  }
  if (!o.out.empty()) jsonl::write(o.out, lines);
  const double acc = scoring::accuracy(scores);
  if (o.pretty) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << acc;
    out << "accuracy " << s.str() << "  (" << scores.size() << " samples)\n";
    return;
  }
  json report = {{"accuracy", acc}, {"samples", scores.size()}};
  report["threshold"] = o.threshold ? json(*o.threshold) : json(nullptr);
  emit(out, report);
}

void metrics_cmd(const Options& o, std::ostream& out) {
  const auto preds = parse::read_parsed(o.preds);
  const auto gold = corpus::read_samples(o.gold);
  std::unique_ptr<metrics::EmbeddingProvider> provider;
  std::optional<std::string> provider_error;
  if (!o.bertscore_provider.empty()) {
    try {
      provider = metrics::make_embedding_provider(o.bertscore_provider);
    } catch (const metrics::ProviderError& e) {
      provider_error = e.what();
    }
  }
  metrics::EvaluateOptions options;
  options.rouge = o.rouge == "max-f" ? metrics::RougeAggregation::kMaxF
                                     : metrics::RougeAggregation::kBestPrecisionRecall;
  options.embeddings = provider.get();
  options.threads = o.threads;
  auto report = metrics::evaluate(preds, gold, metrics::parse_mode(o.mode), options);
  if (provider_error) report.bert_score_unavailable = provider_error;
  if (o.pretty) {
    out << metrics::format_table(report);
  } else {
    emit(out, metrics::to_json(report));
  }
}

void humaneval_select(const Options& o, std::ostream& out) {
  const auto preds = parse::read_parsed(o.preds);
  const auto gold = corpus::read_samples(o.gold);
  const auto tasks = humaneval::select_samples(preds, gold, o.n, o.seed);
  humaneval::write_tasks(o.out, tasks);
  emit(out, {{"selected", tasks.size()}, {"seed", o.seed}, {"out", o.out.string()}});
}

void humaneval_aggregate(const Options& o, std::ostream& out) {
  const auto tasks = humaneval::read_tasks(o.tasks);
  const auto records = humaneval::read_records(o.records);
  const auto report = humaneval::aggregate(records, tasks);
  if (o.pretty) {
    out << humaneval::format_table(report);
  } else {
    emit(out, humaneval::to_json(report));
  }
}

void serve(const Options& o, std::ostream& err) {
  auto tokens = service::load_tokens(o.tokens);
  std::set<std::string> annotators;
  for (const auto& [token, id] : tokens) annotators.insert(id);
  service::CollectionStore store(humaneval::read_tasks(o.tasks), std::move(annotators), o.log,
                                 std::make_shared<service::SystemClock>(),
                                 std::chrono::minutes(o.lease_minutes));
  service::HttpServer server(store, std::move(tokens));

  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  const int port = server.bind({o.host, o.port});
  err << "serving " << store.task_count() << " tasks on http://" << o.host << ":" << port
      << std::endl;
  std::jthread watcher([&] {
    int sig = 0;
    sigwait(&stop_signals, &sig);
    server.stop();
  });
  server.listen();
  // Wake the watcher if the server stopped on its own.
  pthread_kill(watcher.native_handle(), SIGTERM);
}

auto* add_dataset(CLI::App* cmd, Options& o, bool allow_combined) {
  return cmd->add_option("--dataset", o.dataset, "vqax, esnlive or vcr")
      ->required()
      ->check(parsed_by<corpus::parse_dataset>(allow_combined ? "DATASET|combined" : "DATASET",
                                               allow_combined));
}

auto* add_split(CLI::App* cmd, Options& o) {
  return cmd->add_option("--split", o.split, "train, val or test")
      ->required()
      ->check(parsed_by<corpus::parse_split>("SPLIT"));
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app("natural language explanation evaluation toolkit", "evil");
  app.require_subcommand(1);

  auto* corpus_cmd = app.add_subcommand("corpus", "dataset loading and statistics");
  corpus_cmd->require_subcommand(1);
  auto* stats = corpus_cmd->add_subcommand("stats", "per-dataset sample counts of one split");
  add_dataset(stats, o, true);
  add_split(stats, o);
  stats->add_option("--root", o.root, "directory holding <dataset>/<split>.jsonl")->required();
  stats->add_flag("--pretty", o.pretty, "print a table");
  auto* convert = corpus_cmd->add_subcommand("convert", "convert a release file to sample JSON-lines");
  add_dataset(convert, o, false);
  add_split(convert, o);
  convert->add_option("--in", o.in, "release annotation file")->required();
  convert->add_option("--manifest", o.manifest, "VCR split manifest");
  convert->add_option("--metadata-root", o.metadata_root, "VCR per-image metadata directory");
  convert->add_option("--out", o.out, "output JSON-lines")->required();

  auto* prompts_cmd = app.add_subcommand("prompts", "prompt rendering");
  prompts_cmd->require_subcommand(1);
  auto* build = prompts_cmd->add_subcommand("build", "render {id, prompt, target} lines");
  add_dataset(build, o, true);
  add_split(build, o);
  build->add_option("--root", o.root, "corpus root")->required();
  build->add_option("--out", o.out, "output JSON-lines")->required();

  auto* parse_cmd_app = app.add_subcommand("parse", "split generations into answer and explanation");
  parse_cmd_app->add_option("--in", o.in, "JSON-lines {id, generation}")->required();
  parse_cmd_app->add_option("--out", o.out, "parsed JSON-lines")->required();

  auto* score = app.add_subcommand("score", "task accuracy");
  score->add_option("--preds", o.preds, "parsed predictions")->required();
  score->add_option("--gold", o.gold, "gold samples")->required();
  score->add_option("--out", o.out, "per-sample scores JSON-lines");
  score->add_option("--threshold", o.threshold, "count a soft score as correct at or above this value")
      ->check(CLI::Range(0.0, 1.0) & !CLI::IsMember({0.0}));
  score->add_flag("--pretty", o.pretty, "print a one-line summary");

  auto* metrics_app = app.add_subcommand("metrics", "automatic explanation metrics");
  metrics_app->add_option("--preds", o.preds, "parsed predictions")->required();
  metrics_app->add_option("--gold", o.gold, "gold samples")->required();
  metrics_app->add_option("--mode", o.mode, "filtered, unfiltered or scaled")
      ->required()
      ->check(CLI::IsMember({"filtered", "unfiltered", "scaled"}));
  metrics_app->add_option("--bertscore-provider", o.bertscore_provider,
                          "http://host:port/path endpoint or embedding sidecar file");
  metrics_app->add_option("--rouge", o.rouge, "ROUGE-L reference aggregation")
      ->check(CLI::IsMember({"best-pr", "max-f"}));
  metrics_app->add_option("--threads", o.threads, "worker threads, 0 for all cores");
  metrics_app->add_flag("--pretty", o.pretty, "print a table");

  auto* human = app.add_subcommand("humaneval", "human evaluation protocol");
  human->require_subcommand(1);
  auto* select = human->add_subcommand("select", "draw blinded tasks from correct answers");
  select->add_option("--preds", o.preds, "parsed predictions")->required();
  select->add_option("--gold", o.gold, "gold samples")->required();
  select->add_option("--n", o.n, "number of tasks")->check(CLI::PositiveNumber);
  select->add_option("--seed", o.seed, "random seed");
  select->add_option("--out", o.out, "task JSON-lines")->required();
  auto* agg = human->add_subcommand("aggregate", "summarize rating records");
  agg->add_option("--tasks", o.tasks, "task JSON-lines")->required();
  agg->add_option("--records", o.records, "rating records or service event log")->required();
  agg->add_flag("--pretty", o.pretty, "print a table");

  auto* serve_cmd = app.add_subcommand("serve", "run the rating collection service");
  serve_cmd->add_option("--tasks", o.tasks, "task JSON-lines")->required();
  serve_cmd->add_option("--tokens", o.tokens, "annotator token file")->required();
  serve_cmd->add_option("--log", o.log, "event log (created if absent)")->required();
  serve_cmd->add_option("--host", o.host, "listen address");
  serve_cmd->add_option("--port", o.port, "listen port")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--lease-minutes", o.lease_minutes, "task lease length")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> argv_store{"evil"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (auto subs = app.get_subcommands(); !subs.empty(); subs = failing->get_subcommands()) {
      failing = subs.front();
    }
    err << failing->help();
    return 1;
  }

  try {
    if (stats->parsed()) corpus_stats(o, out);
    else if (convert->parsed()) corpus_convert(o, out);
    else if (build->parsed()) prompts_build(o, out);
    else if (parse_cmd_app->parsed()) parse_cmd(o, out);
    else if (score->parsed()) score_cmd(o, out);
    else if (metrics_app->parsed()) metrics_cmd(o, out);
    else if (select->parsed()) humaneval_select(o, out);
    else if (agg->parsed()) humaneval_aggregate(o, out);
    else if (serve_cmd->parsed()) serve(o, err);
    return 0;
  } catch (const LoadError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace evil::cli
