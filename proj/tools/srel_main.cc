// Copyright 2026 The srel Authors
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

// Command-line front end: data generation, vocabulary, training, evaluation,
// scoring, serving and benchmarking.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "srel/common/errors.h"
#include "srel/common/log.h"
#include "srel/data/generator.h"
#include "srel/data/pairs.h"
#include "srel/data/tokenize.h"
#include "srel/eval/report.h"
#include "srel/model/checkpoint.h"
#include "srel/serve/bench.h"
#include "srel/serve/scorer.h"
#include "srel/serve/service.h"
#include "srel/text/vocab_builder.h"
#include "srel/train/ablation.h"
#include "srel/train/recipe.h"
#include "srel/train/trainer.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace srel;

namespace {

struct Globals {
  std::string config;
  std::optional<uint64_t> seed;
  std::string verbosity = "info";
};

train::Recipe make_recipe(const Globals& g) {
  train::Recipe r = g.config.empty() ? train::desk_recipe() : train::load_recipe(g.config);
  if (g.seed) {
    r.gen.seed = *g.seed;
    r.train.seed = *g.seed;
  }
  return r;
}

LogLevel parse_verbosity(const std::string& v) {
  if (v == "error") return LogLevel::kError;
  if (v == "warning") return LogLevel::kWarning;
  if (v == "info") return LogLevel::kInfo;
  return LogLevel::kDebug;
}

struct ModelFiles {
  std::string checkpoint, vocab, lexicon;

  void add_to(CLI::App* cmd, bool with_checkpoint = true) {
    if (with_checkpoint) cmd->add_option("--checkpoint", checkpoint, "Trained checkpoint")->required();
    cmd->add_option("--vocab", vocab, "Vocabulary file")->required();
    cmd->add_option("--lexicon", lexicon, "NER lexicon TSV")->required();
  }
  text::Tokenizer tokenizer() const { return {text::Vocabulary::load(vocab), text::TermLexicon::load(lexicon)}; }
};

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
}

std::vector<std::string> pair_texts(std::span<const data::LabeledPair> pairs) {
  std::vector<std::string> out;
  for (const auto& p : pairs) {
    out.push_back(p.query);
    out.push_back(p.title);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> pair_tuples(std::span<const data::LabeledPair> pairs) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& p : pairs) out.emplace_back(p.query, p.title);
  return out;
}

// ---- gen-data

struct GenArgs {
  std::string out_dir = "data";
};

void run_gen_data(const Globals& g, const GenArgs& a) {
  const train::Recipe r = make_recipe(g);
  const data::Corpus corpus = data::generate_corpus(r.gen);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  auto part = [&](std::size_t begin, std::size_t n) {
    return std::vector<data::LabeledPair>(corpus.pairs.begin() + static_cast<std::ptrdiff_t>(begin),
                                          corpus.pairs.begin() + static_cast<std::ptrdiff_t>(begin + n));
  };
  const std::size_t n_train = std::min(r.splits.train, corpus.pairs.size());
  const std::size_t n_valid = std::min(r.splits.valid, corpus.pairs.size() - n_train);
  const std::size_t n_test = corpus.pairs.size() - n_train - n_valid;
  const auto train_pairs = part(0, n_train);
  data::save_pairs(train_pairs, dir / "train.tsv");
  if (n_valid > 0) data::save_pairs(part(n_train, n_valid), dir / "valid.tsv");
  if (n_test > 0) data::save_pairs(part(n_train + n_valid, n_test), dir / "test.tsv");
  corpus.lexicon.save(dir / "lexicon.tsv");
  data::save_frequency(data::query_frequency(train_pairs), dir / "frequency.tsv");
  write_text(dir / "gen_config.json", json(r.gen).dump(2) + "\n");
  std::cout << "wrote " << n_train << " train, " << n_valid << " valid, " << n_test << " test pairs to " << dir.string()
            << "\n";
}

// ---- build-vocab

struct VocabArgs {
  std::vector<std::string> corpus;
  std::string base;
  std::string out = "vocab.txt";
  std::string write_base;
  std::optional<std::size_t> top_k;
};

void run_build_vocab(const Globals& g, const VocabArgs& a) {
  const train::Recipe r = make_recipe(g);
  const text::Vocabulary base = a.base.empty() ? data::default_base_vocab() : text::Vocabulary::load(a.base);
  if (!a.write_base.empty()) {
    base.save(a.write_base);
    std::cout << "wrote base vocabulary (" << base.size() << " tokens) to " << a.write_base << "\n";
    if (a.corpus.empty()) return;
  }
  if (a.corpus.empty()) throw ConfigError("build-vocab: --corpus is required");
  std::vector<data::LabeledPair> pairs;
  for (const auto& path : a.corpus) {
    auto part = data::load_pairs(path);
    pairs.insert(pairs.end(), part.begin(), part.end());
  }
  const text::Vocabulary ext =
      text::build_extended_vocab(text::count_words(pair_texts(pairs)), base, a.top_k.value_or(r.vocab_top_k));
  ext.save(a.out);
  const auto tuples = pair_tuples(pairs);
  const auto before = text::subtoken_stats(tuples, base);
  const auto after = text::subtoken_stats(tuples, ext);
  std::printf("%-22s %10s %10s\n", "sub-tokens (mean)", "base", "extended");
  std::printf("%-22s %10.3f %10.3f\n", "per word", before.per_word, after.per_word);
  std::printf("%-22s %10.3f %10.3f\n", "per title", before.per_title, after.per_title);
  std::printf("%-22s %10.3f %10.3f\n", "per pair", before.per_pair, after.per_pair);
  std::printf("vocabulary: %zu base + %zu added -> %s\n", base.size(), ext.size() - base.size(), a.out.c_str());
}

// ---- train

struct TrainArgs {
  std::string train, valid, out = "model.ckpt", history;
  bool resample = false;
  ModelFiles files;
};

void run_train(const Globals& g, const TrainArgs& a) {
  train::Recipe r = make_recipe(g);
  const text::Tokenizer tokenizer = a.files.tokenizer();
  auto train_pairs = data::load_pairs(a.train);
  if (a.resample) train_pairs = data::resample_by_click(train_pairs);
  const auto valid_pairs = data::load_pairs(a.valid);
  const auto train_tok = data::tokenize_pairs(train_pairs, tokenizer);
  const auto valid_tok = data::tokenize_pairs(valid_pairs, tokenizer);
  r.model.vocab_size = tokenizer.vocab().size();
  r.model.validate();

  std::ofstream history;
  if (!a.history.empty()) {
    history.open(a.history, std::ios::binary);
    if (!history) throw InputError("train: cannot write " + a.history);
  }
  SREL_LOG_INFO << "training on " << train_tok.size() << " pairs, validating on " << valid_tok.size();
  const auto result = train::train_loop(model::init_params(r.model, r.train.seed), train_tok, valid_tok,
                                        batching::special_ids(tokenizer.vocab()), r.train,
                                        a.history.empty() ? nullptr : &history);
  model::Checkpoint ckpt;
  ckpt.params = result.best;
  ckpt.vocab_fingerprint = tokenizer.vocab().fingerprint();
  ckpt.metadata = {{"config", train::flat_config(r)},
                   {"best_valid_auc", result.best_auc},
                   {"epochs_run", result.epochs_run},
                   {"steps", result.steps}};
  model::save_checkpoint(a.out, ckpt);
  std::cout << "best validation AUC " << result.best_auc << " after " << result.epochs_run << " epochs; checkpoint "
            << ckpt.id << " -> " << a.out << "\n";
}

// ---- eval

struct EvalArgs {
  std::vector<std::string> pairs;
  std::optional<double> threshold;
  std::optional<double> temperature;
  bool json_out = false;
  bool no_trim = false;
  ModelFiles files;
};

void run_eval(const Globals&, const EvalArgs& a) {
  const auto ckpt = model::load_checkpoint(a.files.checkpoint);
  const text::Tokenizer tokenizer = a.files.tokenizer();
  if (ckpt.vocab_fingerprint != tokenizer.vocab().fingerprint()) {
    throw ConfigError("eval: checkpoint was trained with a different vocabulary");
  }
  eval::PredictOptions po;
  po.specials = batching::special_ids(tokenizer.vocab());
  po.temperature = a.temperature.value_or(ckpt.params.config.temperature);
  po.trim = !a.no_trim;
  std::vector<std::pair<std::string, eval::MetricReport>> rows;
  json out = json::object();
  for (const auto& path : a.pairs) {
    const auto pairs = data::tokenize_pairs(data::load_pairs(path), tokenizer);
    const auto report = eval::evaluate(ckpt.params, pairs, po, a.threshold.value_or(0.5));
    rows.emplace_back(fs::path(path).filename().string(), report);
    out[path] = report;
  }
  if (a.json_out) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << eval::format_table(rows);
  }
}

// ---- score

struct ScoreArgs {
  std::string query, candidates, request;
  std::optional<std::size_t> max_keep;
  std::optional<double> temperature;
  ModelFiles files;
};

serve::ScorerOptions scorer_options(const model::Checkpoint& ckpt, std::optional<double> temperature,
                                    std::size_t batch_size, bool trim) {
  serve::ScorerOptions o;
  o.temperature = temperature.value_or(ckpt.params.config.temperature);
  o.batch_size = batch_size;
  o.trim = trim;
  return o;
}

void run_score(const Globals&, const ScoreArgs& a) {
  auto ckpt = model::load_checkpoint(a.files.checkpoint);
  const auto options = scorer_options(ckpt, a.temperature, 64, true);
  const serve::RelevanceScorer scorer(std::move(ckpt), a.files.tokenizer(), options);
  serve::ScoreRequest req;
  if (!a.request.empty()) {
    std::ifstream in(a.request);
    if (!in) throw InputError("score: cannot open " + a.request);
    std::stringstream buf;
    buf << in.rdbuf();
    req = serve::parse_score_request(buf.str());
  } else {
    if (a.query.empty()) throw ConfigError("score: give --request or --query");
    req.query = a.query;
    if (a.candidates == "-" || a.candidates.empty()) {
      req.candidates = read_lines(std::cin);
    } else {
      std::ifstream in(a.candidates);
      if (!in) throw InputError("score: cannot open " + a.candidates);
      req.candidates = read_lines(in);
    }
  }
  if (a.max_keep) req.max_keep = a.max_keep;
  std::cout << serve::response_json(scorer.score(req, nullptr)).dump() << "\n";
}

// ---- refresh-cache and serve

struct CacheArgs {
  std::string frequency, history;
  double fraction = 0.2;
  std::size_t budget = 100000;
};

std::shared_ptr<serve::ScoreCache> refresh(const CacheArgs& a, const serve::RelevanceScorer& scorer) {
  serve::RefreshConfig rc;
  rc.query_fraction = a.fraction;
  rc.pair_budget = a.budget;
  const auto ranked = a.frequency.empty() ? std::vector<data::QueryCount>{} : data::load_frequency(a.frequency);
  const auto history = a.history.empty() ? std::vector<data::LabeledPair>{} : data::load_pairs(a.history);
  const auto start = std::chrono::steady_clock::now();
  auto cache = serve::refresh_cache(ranked, history, scorer, rc);
  const auto st = cache->stats();
  SREL_LOG_INFO << "cache refreshed: " << st.queries << " queries, " << st.scores << " pair scores in "
                << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s";
  return cache;
}

struct RefreshArgs {
  CacheArgs cache;
  std::optional<double> temperature;
  ModelFiles files;
};

void run_refresh_cache(const Globals&, const RefreshArgs& a) {
  auto ckpt = model::load_checkpoint(a.files.checkpoint);
  const auto options = scorer_options(ckpt, a.temperature, 64, true);
  const serve::RelevanceScorer scorer(std::move(ckpt), a.files.tokenizer(), options);
  const auto cache = refresh(a.cache, scorer);
  const auto st = cache->stats();
  std::cout << json{{"checkpoint", scorer.checkpoint_id()},
                    {"temperature", options.temperature},
                    {"queries", st.queries},
                    {"scores", st.scores}}
                   .dump()
            << "\n";
}

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  bool no_cache = false;
  bool no_drs = false;
  double refresh_seconds = 0;
  std::size_t max_body = 16u << 20;
  std::size_t max_candidates = 10000;
  std::optional<double> temperature;
  CacheArgs cache;
  ModelFiles files;
};

void run_serve(const Globals&, const ServeArgs& a) {
  auto ckpt = model::load_checkpoint(a.files.checkpoint);
  const auto options = scorer_options(ckpt, a.temperature, 64, !a.no_drs);
  auto scorer = std::make_shared<serve::RelevanceScorer>(std::move(ckpt), a.files.tokenizer(), options);
  std::shared_ptr<serve::ScoreCache> cache;
  if (!a.no_cache) cache = a.cache.history.empty() && a.cache.frequency.empty()
                               ? std::make_shared<serve::ScoreCache>()
                               : refresh(a.cache, *scorer);
  serve::ServiceOptions so;
  so.max_body_bytes = a.max_body;
  so.max_candidates = a.max_candidates;
  so.use_cache = !a.no_cache;
  serve::ScoreService service(scorer, cache, so);
  if (a.refresh_seconds > 0 && !a.no_cache) {
    std::thread([&service, &a, scorer] {
      for (;;) {
        std::this_thread::sleep_for(std::chrono::duration<double>(a.refresh_seconds));
        try {
          service.replace_cache(refresh(a.cache, *scorer));
        } catch (const std::exception& e) {
          SREL_LOG_ERROR << "cache refresh failed: " << e.what();
        }
      }
    }).detach();
  }
  if (!serve::run_http_server(service, a.host, a.port)) {
    throw ConfigError("serve: cannot listen on " + a.host + ":" + std::to_string(a.port));
  }
}

// ---- bench

struct BenchArgs {
  std::vector<std::string> pairs;
  std::string drs = "both", cache = "both", json_out;
  std::size_t batch_size = 64;
  std::size_t max_candidates = 5000;
  std::optional<double> temperature;
  ModelFiles files;
};

std::vector<bool> on_off(const std::string& v) {
  if (v == "on") return {true};
  if (v == "off") return {false};
  return {false, true};
}

void run_bench(const Globals&, const BenchArgs& a) {
  const auto ckpt = model::load_checkpoint(a.files.checkpoint);
  std::vector<data::LabeledPair> pairs;
  for (const auto& path : a.pairs) {
    auto part = data::load_pairs(path);
    pairs.insert(pairs.end(), part.begin(), part.end());
  }
  serve::BenchOptions o;
  o.scorer = scorer_options(ckpt, a.temperature, a.batch_size, true);
  o.drs = on_off(a.drs);
  o.cache = on_off(a.cache);
  o.max_candidates = a.max_candidates;
  const auto rows = serve::run_bench(ckpt, a.files.tokenizer(), pairs, o);
  std::cout << serve::format_bench(rows);
  if (!a.json_out.empty()) write_text(a.json_out, json(rows).dump(2) + "\n");
}

// ---- ablate

struct AblateArgs {
  std::vector<std::string> arms = {"bce", "at", "cat"};
  std::vector<uint64_t> seeds = {1, 2, 3};
  std::vector<double> epsilons;
  std::string json_out;
};

void run_ablate(const Globals& g, const AblateArgs& a) {
  const auto recipe = make_recipe(g);
  recipe.validate();
  train::AblationOptions o;
  o.arms.clear();
  for (const auto& name : a.arms) o.arms.push_back(train::parse_arm(name));
  o.seeds = a.seeds;
  o.epsilons = a.epsilons;
  const auto desk = train::prepare_desk(recipe);
  const auto results = train::run_ablation(recipe, desk, o);
  std::cout << train::format_ablation(results);
  if (!a.json_out.empty()) write_text(a.json_out, json(results).dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query-item relevance: data, vocabulary, training, evaluation and serving"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  Globals g;
  app.add_option("--config", g.config, "Flat JSON of GenConfig/ModelConfig/TrainConfig fields")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Seed for data generation and training");
  app.add_option("--verbosity", g.verbosity, "error, warning, info or debug")
      ->check(CLI::IsMember({"error", "warning", "info", "debug"}));

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate a labeled synthetic corpus and its lexicon");
  gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory");

  VocabArgs vocab;
  auto* vocab_cmd = app.add_subcommand("build-vocab", "Extend the base vocabulary with frequent fragmented words");
  vocab_cmd->add_option("--corpus", vocab.corpus, "Pair files (TSV or JSONL)");
  vocab_cmd->add_option("--base", vocab.base, "Base vocabulary (built-in when omitted)");
  vocab_cmd->add_option("--top-k", vocab.top_k, "Words to add");
  vocab_cmd->add_option("--out", vocab.out, "Output vocabulary file");
  vocab_cmd->add_option("--write-base", vocab.write_base, "Also write the base vocabulary here");

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train the relevance model");
  train_cmd->add_option("--train", tr.train, "Training pairs")->required();
  train_cmd->add_option("--valid", tr.valid, "Validation pairs")->required();
  train_cmd->add_option("--out", tr.out, "Checkpoint path");
  train_cmd->add_option("--history", tr.history, "JSON-lines loss and metric history");
  train_cmd->add_flag("--resample", tr.resample, "Duplicate pairs by click level");
  tr.files.add_to(train_cmd, false);

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Report AUC, F1, Spearman and Pearson");
  eval_cmd->add_option("--pairs", ev.pairs, "Labeled pair files")->required();
  eval_cmd->add_option("--threshold", ev.threshold, "Decision threshold for F1");
  eval_cmd->add_option("--temperature", ev.temperature, "Softmax temperature");
  eval_cmd->add_flag("--json", ev.json_out, "Print JSON instead of a table");
  eval_cmd->add_flag("--no-trim", ev.no_trim, "Score padded batches");
  ev.files.add_to(eval_cmd);

  ScoreArgs sc;
  auto* score_cmd = app.add_subcommand("score", "Score candidates for one query");
  score_cmd->add_option("--query", sc.query, "Query text");
  score_cmd->add_option("--candidates", sc.candidates, "File of titles, one per line ('-' for stdin)");
  score_cmd->add_option("--request", sc.request, "JSON request body file");
  score_cmd->add_option("--max-keep", sc.max_keep, "Number of candidates kept");
  score_cmd->add_option("--temperature", sc.temperature, "Softmax temperature");
  sc.files.add_to(score_cmd);

  auto add_cache_args = [](CLI::App* cmd, CacheArgs& c) {
    cmd->add_option("--frequency", c.frequency, "Ranked query frequency TSV");
    cmd->add_option("--history", c.history, "Pair history for pair-score precomputation");
    cmd->add_option("--fraction", c.fraction, "Share of top queries to pre-tokenize")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--budget", c.budget, "Most frequent pairs to pre-score");
  };

  RefreshArgs rf;
  auto* refresh_cmd = app.add_subcommand("refresh-cache", "Precompute query tokens and frequent pair scores");
  add_cache_args(refresh_cmd, rf.cache);
  refresh_cmd->add_option("--temperature", rf.temperature, "Softmax temperature");
  rf.files.add_to(refresh_cmd);

  ServeArgs sv;
  auto* serve_cmd = app.add_subcommand("serve", "HTTP scoring service");
  serve_cmd->add_option("--host", sv.host, "Bind address");
  serve_cmd->add_option("--port", sv.port, "Port");
  serve_cmd->add_flag("--no-cache", sv.no_cache, "Disable the score cache");
  serve_cmd->add_flag("--no-drs", sv.no_drs, "Score padded batches");
  serve_cmd->add_option("--refresh-seconds", sv.refresh_seconds, "Rebuild the cache periodically");
  serve_cmd->add_option("--max-body", sv.max_body, "Largest accepted request body in bytes");
  serve_cmd->add_option("--max-candidates", sv.max_candidates, "Most candidates per request");
  serve_cmd->add_option("--temperature", sv.temperature, "Softmax temperature");
  add_cache_args(serve_cmd, sv.cache);
  sv.files.add_to(serve_cmd);

  BenchArgs bn;
  auto* bench_cmd = app.add_subcommand("bench", "Latency, MHA FLOPs and AUC with DRS and cache on or off");
  bench_cmd->add_option("--pairs", bn.pairs, "Labeled pair files")->required();
  bench_cmd->add_option("--drs", bn.drs, "on, off or both")->check(CLI::IsMember({"on", "off", "both"}));
  bench_cmd->add_option("--cache", bn.cache, "on, off or both")->check(CLI::IsMember({"on", "off", "both"}));
  bench_cmd->add_option("--batch-size", bn.batch_size, "Pairs per forward batch");
  bench_cmd->add_option("--max-candidates", bn.max_candidates, "Most candidates per request");
  bench_cmd->add_option("--temperature", bn.temperature, "Softmax temperature");
  bench_cmd->add_option("--json", bn.json_out, "Also write the grid as JSON");
  bn.files.add_to(bench_cmd);

  AblateArgs ab;
  auto* ablate_cmd = app.add_subcommand("ablate", "Train BCE-only, AT-only and CAT arms on a generated corpus");
  ablate_cmd->add_option("--arms", ab.arms, "Any of bce, at, cat")->check(CLI::IsMember({"bce", "at", "cat"}));
  ablate_cmd->add_option("--seeds", ab.seeds, "Training seeds");
  ablate_cmd->add_option("--eps", ab.epsilons, "Perturbation radii (recipe value when omitted)");
  ablate_cmd->add_option("--json", ab.json_out, "Also write per-run results as JSON");

  CLI11_PARSE(app, argc, argv);
  set_log_level(parse_verbosity(g.verbosity));
  try {
    if (*gen_cmd) run_gen_data(g, gen);
    if (*vocab_cmd) run_build_vocab(g, vocab);
    if (*train_cmd) run_train(g, tr);
    if (*eval_cmd) run_eval(g, ev);
    if (*score_cmd) run_score(g, sc);
    if (*refresh_cmd) run_refresh_cache(g, rf);
    if (*serve_cmd) run_serve(g, sv);
    if (*bench_cmd) run_bench(g, bn);
    if (*ablate_cmd) run_ablate(g, ab);
  } catch (const srel::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
