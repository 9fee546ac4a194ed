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

#include "srel/train/trainer.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "srel/common/errors.h"
#include "srel/common/hash.h"
#include "srel/common/log.h"
#include "srel/core/ops.h"
#include "srel/eval/report.h"

namespace srel::train {
namespace {

using core::Tape;
using core::Tensor;
using core::Var;
namespace ops = core::ops;

constexpr uint64_t kBatchStream = 0x62617463680000ull;
constexpr uint64_t kAugmentStream = 0x6175676d656e74ull;

[[noreturn]] void fail_non_finite(const TrainState& state, const model::InputEncoding& enc,
                                  std::span<const int> labels, const LossBreakdown& b) {
  nlohmann::json dump;
  dump["step"] = state.step;
  dump["losses"] = b;
  dump["n"] = enc.n;
  dump["l"] = enc.l;
  dump["tokens"] = enc.tokens;
  dump["ner"] = enc.ner;
  dump["labels"] = std::vector<int>(labels.begin(), labels.end());
  const auto path =
      std::filesystem::temp_directory_path() / ("srel_nonfinite_step" + std::to_string(state.step) + ".json");
  std::ofstream(path) << dump.dump() << '\n';
  throw NumericError("train_step " + std::to_string(state.step) + ": non-finite loss (bce=" +
                     std::to_string(b.l_bce) + ", ate=" + std::to_string(b.l_ate) + ", adv=" +
                     std::to_string(b.l_adv) + "); batch dumped to " + path.string());
}

void check_labels(const model::InputEncoding& enc, std::span<const int> labels) {
  if (labels.size() != enc.n) {
    throw DimensionError("train_step: " + std::to_string(labels.size()) + " labels for " + std::to_string(enc.n) +
                         " rows");
  }
}

struct CatGraph {
  Var total;
  LossBreakdown losses;
};

CatGraph build_cat(Tape& tape, model::EncoderParams& params, const model::InputEncoding& enc,
                   std::span<const int> labels, double temperature, const TrainConfig& config, core::Rng& rng,
                   bool training) {
  Var x = model::embed(tape, params, enc, training, rng);
  const core::Rng layer_stream = rng;

  core::Rng clean_rng = layer_stream;
  Var p_clean = ops::softmax(model::encode(tape, params, enc, x, training, clean_rng), temperature);
  Var bce = bce_loss(p_clean, labels);

  Tensor r_adv = Tensor::zeros_like(x.value());
  if (config.epsilon > 0) {
    const Tensor g = tape.gradient(log_likelihood(p_clean, labels), x);
    r_adv = adversarial_perturbation(g, enc.n, config.epsilon);
  }
  core::Rng adv_rng = layer_stream;
  Var x_adv = ops::add(x, tape.constant(std::move(r_adv)));
  Var p_adv = ops::softmax(model::encode(tape, params, enc, x_adv, training, adv_rng), temperature);
  Var ate = bce_loss(p_adv, labels);
  Var adv = ops::symmetric_kl(p_clean, p_adv, kProbabilityFloor);

  const LossWeights& w = config.weights;
  CatGraph out;
  out.total = ops::add(ops::add(ops::scale(bce, w.bce), ops::scale(ate, w.ate)), ops::scale(adv, w.adv));
  out.losses.l_bce = bce.value().item();
  out.losses.l_ate = ate.value().item();
  out.losses.l_adv = adv.value().item();
  out.losses.total = out.total.value().item();
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (weights.bce < 0 || weights.ate < 0 || weights.adv < 0) throw ConfigError("train config: negative loss weight");
  if (!(epsilon >= 0)) throw ConfigError("train config: epsilon must be non-negative");
  if (!(schedule.tau_min > 0) || schedule.tau_max < schedule.tau_min) {
    throw ConfigError("train config: need tau_max >= tau_min > 0");
  }
  if (!(learning_rate > 0)) throw ConfigError("train config: learning rate must be positive");
  if (batch_size == 0 || epochs == 0 || eval_batch_size == 0) throw ConfigError("train config: zero size");
  if (!(word_drop >= 0 && word_drop <= 1)) throw ConfigError("train config: word_drop must lie in [0, 1]");
  if (limits.query == 0 || limits.item == 0) throw ConfigError("train config: segment limits must be positive");
  if (!(clip_norm >= 0)) throw ConfigError("train config: clip_norm must be non-negative");
}

double TrainConfig::learning_rate_at(uint64_t step, uint64_t total_steps) const {
  if (warmup_steps > 0 && step < warmup_steps) {
    return learning_rate * static_cast<double>(step + 1) / static_cast<double>(warmup_steps);
  }
  if (!linear_decay || total_steps <= warmup_steps) return learning_rate;
  const double span = static_cast<double>(total_steps - warmup_steps);
  const double left = static_cast<double>(total_steps > step ? total_steps - step : 0);
  return learning_rate * std::min(1.0, left / span);
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"objective", c.objective == Objective::kCat ? "cat" : "bce"},
                     {"learning_rate", c.learning_rate},
                     {"batch_size", c.batch_size},
                     {"epochs", c.epochs},
                     {"patience", c.patience},
                     {"alpha", {c.weights.bce, c.weights.ate, c.weights.adv}},
                     {"epsilon", c.epsilon},
                     {"tau_max", c.schedule.tau_max},
                     {"tau_min", c.schedule.tau_min},
                     {"tau_phases", c.schedule.phases},
                     {"word_drop", c.word_drop},
                     {"in_batch_negatives", c.in_batch_negatives},
                     {"seed", c.seed},
                     {"beta1", c.beta1},
                     {"beta2", c.beta2},
                     {"adam_eps", c.adam_eps},
                     {"clip_norm", c.clip_norm},
                     {"warmup_steps", c.warmup_steps},
                     {"linear_decay", c.linear_decay},
                     {"trim", c.trim},
                     {"query_limit", c.limits.query},
                     {"item_limit", c.limits.item},
                     {"eval_batch_size", c.eval_batch_size}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  const TrainConfig d;
  const std::string objective = j.value("objective", std::string("cat"));
  if (objective != "cat" && objective != "bce") throw ConfigError("train config: objective must be cat or bce");
  c.objective = objective == "cat" ? Objective::kCat : Objective::kBce;
  c.learning_rate = j.value("learning_rate", d.learning_rate);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.epochs = j.value("epochs", d.epochs);
  c.patience = j.value("patience", d.patience);
  if (j.contains("alpha")) {
    const auto& a = j.at("alpha");
    if (!a.is_array() || a.size() != 3) throw ConfigError("train config: alpha must hold three weights");
    c.weights = {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
  } else {
    c.weights = d.weights;
  }
  c.epsilon = j.value("epsilon", d.epsilon);
  c.schedule.tau_max = j.value("tau_max", d.schedule.tau_max);
  c.schedule.tau_min = j.value("tau_min", d.schedule.tau_min);
  c.schedule.phases = j.value("tau_phases", d.schedule.phases);
  c.word_drop = j.value("word_drop", d.word_drop);
  c.in_batch_negatives = j.value("in_batch_negatives", d.in_batch_negatives);
  c.seed = j.value("seed", d.seed);
  c.beta1 = j.value("beta1", d.beta1);
  c.beta2 = j.value("beta2", d.beta2);
  c.adam_eps = j.value("adam_eps", d.adam_eps);
  c.clip_norm = j.value("clip_norm", d.clip_norm);
  c.warmup_steps = j.value("warmup_steps", d.warmup_steps);
  c.linear_decay = j.value("linear_decay", d.linear_decay);
  c.trim = j.value("trim", d.trim);
  c.limits.query = j.value("query_limit", d.limits.query);
  c.limits.item = j.value("item_limit", d.limits.item);
  c.eval_batch_size = j.value("eval_batch_size", d.eval_batch_size);
}

LossBreakdown cat_losses(model::EncoderParams& params, const model::InputEncoding& enc, std::span<const int> labels,
                         double temperature, const TrainConfig& config, core::Rng rng, bool training) {
  check_labels(enc, labels);
  Tape tape;
  return build_cat(tape, params, enc, labels, temperature, config, rng, training).losses;
}

LossBreakdown train_step(TrainState& state, const model::InputEncoding& enc, std::span<const int> labels,
                         double temperature, const TrainConfig& config) {
  check_labels(enc, labels);
  core::Rng rng(mix_seed(config.seed, state.step));
  Tape tape;
  CatGraph graph = build_cat(tape, state.params, enc, labels, temperature, config, rng, true);
  const LossBreakdown& b = graph.losses;
  if (!std::isfinite(b.total) || !std::isfinite(b.l_bce) || !std::isfinite(b.l_ate) || !std::isfinite(b.l_adv)) {
    fail_non_finite(state, enc, labels, b);
  }
  tape.backward(graph.total);
  clip_grad_norm(state.params, config.clip_norm);
  adam_step(state.params, state.adam, config.adam(state.step, state.total_steps));
  ++state.step;
  return b;
}

LossBreakdown bce_step(TrainState& state, const model::InputEncoding& enc, std::span<const int> labels,
                       double temperature, const TrainConfig& config) {
  check_labels(enc, labels);
  model::EncoderParams& params = state.params;
  core::Rng rng(mix_seed(config.seed, state.step));
  Tape tape;
  Var x = model::embed(tape, params, enc, true, rng);
  Var p = ops::softmax(model::encode(tape, params, enc, x, true, rng), temperature);
  Var bce = bce_loss(p, labels);
  Var total = ops::scale(bce, config.weights.bce);
  LossBreakdown b = total_loss(bce.value().item(), 0.0, 0.0, {config.weights.bce, 0.0, 0.0});
  b.total = total.value().item();
  if (!std::isfinite(b.total)) fail_non_finite(state, enc, labels, b);
  tape.backward(total);
  clip_grad_norm(params, config.clip_norm);
  adam_step(params, state.adam, config.adam(state.step, state.total_steps));
  ++state.step;
  return b;
}

TrainResult train_loop(model::EncoderParams init, std::span<const batching::TokenizedPair> train,
                       std::span<const batching::TokenizedPair> validation, batching::SpecialIds specials,
                       const TrainConfig& config, std::ostream* history) {
  config.validate();
  if (train.empty()) throw InputError("train_loop: empty training corpus");
  if (validation.empty()) throw InputError("train_loop: empty validation set");
  init.config.require_layout(config.limits.query, config.limits.item);

  TrainResult result;
  TrainState state;
  state.params = std::move(init);
  result.best = state.params;

  const std::size_t batches_per_epoch = (train.size() + config.batch_size - 1) / config.batch_size;
  const std::size_t total_steps = batches_per_epoch * config.epochs;
  state.total_steps = total_steps;
  auto emit = [&](nlohmann::json record) {
    if (history != nullptr) *history << record.dump() << '\n';
    result.history.push_back(std::move(record));
  };

  eval::PredictOptions eval_options;
  eval_options.limits = config.limits;
  eval_options.specials = specials;
  eval_options.batch_size = config.eval_batch_size;
  eval_options.temperature = config.schedule.tau_min;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    core::Rng order_rng(mix_seed(config.seed ^ kBatchStream, epoch));
    std::vector<std::size_t> perm(train.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[order_rng.below(i)]);
    std::vector<std::size_t> lengths(perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k) {
      const auto& p = train[perm[k]];
      lengths[k] = std::min(p.item.size(), config.limits.item) * 64 + std::min(p.query.size(), config.limits.query);
    }
    auto batches = batching::bucket_by_length(lengths, config.batch_size, &order_rng);

    for (auto& batch_positions : batches) {
      std::vector<batching::TokenizedPair> pairs;
      pairs.reserve(batch_positions.size());
      for (std::size_t k : batch_positions) pairs.push_back(train[perm[k]]);
      core::Rng augment_rng(mix_seed(config.seed ^ kAugmentStream, state.step));
      if (config.word_drop > 0) {
        for (auto& p : pairs) std::tie(p.query, p.item) = word_drop(p.query, p.item, config.word_drop, augment_rng);
      }
      if (config.in_batch_negatives) pairs = in_batch_negatives(pairs, augment_rng);
      batching::PairBatch batch = batching::make_batch(pairs, {}, config.limits, specials);
      if (config.trim) batch = batching::trim_batch(batch).batch;
      const model::InputEncoding enc = batching::to_encoding(batch);
      const double tau = temperature(state.step, total_steps, config.schedule);
      const uint64_t step = state.step;
      const LossBreakdown b = config.objective == Objective::kCat
                                  ? train_step(state, enc, batch.labels, tau, config)
                                  : bce_step(state, enc, batch.labels, tau, config);
      nlohmann::json record = b;
      record["step"] = step;
      record["tau"] = tau;
      record["lr"] = config.learning_rate_at(step, total_steps);
      emit(std::move(record));
    }

    const eval::MetricReport report = eval::evaluate(state.params, validation, eval_options);
    ++result.epochs_run;
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    SREL_LOG_INFO << "epoch " << epoch << " val_auc=" << report.auc << " f1_micro=" << report.f1_micro << " ("
                           << seconds << " s)";
    emit({{"epoch", epoch},
          {"val_auc", report.auc},
          {"val_f1_micro", report.f1_micro},
          {"val_f1_macro", report.f1_macro}});
    if (report.auc > state.best_auc) {
      state.best_auc = report.auc;
      state.epochs_since_improvement = 0;
      result.best = state.params;
    } else {
      ++state.epochs_since_improvement;
      if (state.epochs_since_improvement > config.patience) break;
    }
  }
  result.best_auc = state.best_auc;
  result.steps = state.step;
  return result;
}

}  // namespace srel::train
