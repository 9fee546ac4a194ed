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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "srel/common/errors.h"
#include "srel/core/functional.h"
#include "srel/core/ops.h"
#include "srel/train/ablation.h"
#include "srel/train/augment.h"
#include "srel/train/losses.h"
#include "srel/train/trainer.h"
#include "support/fixtures.h"

namespace srel::train {
namespace {

using core::Rng;
using core::Tensor;
using testing::random_batch;
using testing::random_tokens;
using testing::tiny_config;

double row_norm(const Tensor& t, std::size_t pairs, std::size_t p) {
  const std::size_t slice = t.size() / pairs;
  double s = 0;
  for (std::size_t i = 0; i < slice; ++i) s += t[p * slice + i] * t[p * slice + i];
  return std::sqrt(s);
}

TEST_CASE("bce examples") {
  CHECK(bce_loss(std::vector<double>{1.0, 1.0}, std::vector<int>{1, 1}) == 0.0);
  CHECK(bce_loss(std::vector<double>{0.0}, std::vector<int>{0}) == 0.0);
  CHECK(bce_loss(std::vector<double>{0.5, 0.5, 0.5}, std::vector<int>{1, 0, 1}) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  const double a = bce_loss(std::vector<double>{0.8}, std::vector<int>{1});
  const double b = bce_loss(std::vector<double>{0.3}, std::vector<int>{0});
  CHECK(bce_loss(std::vector<double>{0.8, 0.3}, std::vector<int>{1, 0}) == doctest::Approx((a + b) / 2));
  CHECK(bce_loss(std::vector<double>{0.0}, std::vector<int>{1}) == doctest::Approx(-std::log(1e-12)));
  CHECK_THROWS_AS(bce_loss(std::vector<double>{0.5}, std::vector<int>{1, 0}), DimensionError);

  core::Tape tape;
  Tensor probs({2, 2}, {0.2, 0.8, 0.7, 0.3});
  const std::vector<int> y = {1, 0};
  CHECK(bce_loss(tape.constant(probs), y).value().item() == doctest::Approx(bce_loss(probs, y)).epsilon(1e-14));
}

TEST_CASE("adversarial perturbation laws") {
  Tensor g({1, 2}, {3.0, 4.0});
  Tensor r = adversarial_perturbation(g, 1, 0.1);
  CHECK(r[0] == doctest::Approx(-0.06).epsilon(1e-14));
  CHECK(r[1] == doctest::Approx(-0.08).epsilon(1e-14));
  CHECK(adversarial_perturbation(g, 1, 0.0) == Tensor({1, 2}));
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t pairs = 1 + rng.below(5), rows = 1 + rng.below(6), d = 1 + rng.below(8);
    Tensor grad({pairs * rows, d});
    for (double& v : grad.values()) v = rng.normal();
    const std::size_t zero_pair = rng.below(pairs);
    for (std::size_t i = 0; i < rows * d; ++i) grad[zero_pair * rows * d + i] = 0.0;
    const double eps = 0.05;
    Tensor pert = adversarial_perturbation(grad, pairs, eps);
    for (std::size_t p = 0; p < pairs; ++p) {
      if (p == zero_pair) {
        CHECK(row_norm(pert, pairs, p) == 0.0);
        continue;
      }
      CHECK(std::abs(row_norm(pert, pairs, p) - eps) <= 1e-10);
      double dot = 0;
      const std::size_t slice = rows * d;
      for (std::size_t i = 0; i < slice; ++i) dot += pert[p * slice + i] * grad[p * slice + i];
      CHECK(std::abs(dot / (row_norm(pert, pairs, p) * row_norm(grad, pairs, p)) + 1.0) <= 1e-10);
    }
  }
  CHECK_THROWS_AS(adversarial_perturbation(g, 3, 0.1), DimensionError);
}

TEST_CASE("adv kl loss") {
  Tensor p({1, 2}, {0.9, 0.1}), q({1, 2}, {0.5, 0.5});
  CHECK(adv_kl_loss(p, p) == 0.0);
  CHECK(adv_kl_loss(p, q) == adv_kl_loss(q, p));
  const double oracle = 0.5 * ((0.9 * std::log(0.9 / 0.5) + 0.1 * std::log(0.1 / 0.5)) +
                               (0.5 * std::log(0.5 / 0.9) + 0.5 * std::log(0.5 / 0.1)));
  CHECK(adv_kl_loss(p, q) == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(adv_kl_loss(p, q) == doctest::Approx(0.439445).epsilon(1e-5));
  CHECK_THROWS_AS(adv_kl_loss(p, Tensor({1, 2}, {0.5, 0.6})), ContractError);

  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    Tensor a({n, 2}), b({n, 2});
    for (std::size_t i = 0; i < n; ++i) {
      const double u = rng.uniform(), v = rng.uniform();
      a.at(i, 0) = u, a.at(i, 1) = 1 - u, b.at(i, 0) = v, b.at(i, 1) = 1 - v;
    }
    const double value = adv_kl_loss(a, b);
    CHECK(value >= 0.0);
    CHECK(value == adv_kl_loss(b, a));
    core::Tape tape;
    const double graph = core::ops::symmetric_kl(tape.constant(a), tape.constant(b)).value().item();
    CHECK(std::abs(graph - value) <= 1e-12);
    CHECK(core::ops::symmetric_kl(tape.constant(b), tape.constant(a)).value().item() == graph);
  }
}

TEST_CASE("total loss") {
  LossWeights defaults;
  CHECK(total_loss(0, 0, 0, defaults).total == 0.0);
  CHECK(total_loss(1, 1, 1, defaults).total == doctest::Approx(1.01).epsilon(1e-14));
  CHECK(total_loss(0.7, 3.0, 9.0, {1.0, 0.0, 0.0}).total == 0.7);
  LossBreakdown b = total_loss(0.31, 0.47, 0.02, defaults);
  CHECK(std::abs(b.total - (0.5 * b.l_bce + 0.5 * b.l_ate + 0.01 * b.l_adv)) <= 1e-12);
}

TEST_CASE("temperature schedule") {
  TemperatureSchedule s;
  const std::size_t total = 30;
  CHECK(temperature(0, total, s) == 4.0);
  CHECK(temperature(total - 1, total, s) == 1.0);
  CHECK(temperature(15, total, s) == doctest::Approx(2.0).epsilon(1e-14));
  double prev = 1e9;
  for (std::size_t step = 0; step < total; ++step) {
    const double t = temperature(step, total, s);
    CHECK(t <= prev);
    prev = t;
  }
  CHECK(temperature(0, 1, s) == 1.0);
  // Heated softmax keeps the argmax.
  Tensor z({3, 2}, {0.1, 0.4, 2.0, -1.0, 0.0, 0.0001});
  for (double t : {1.0, 2.0, 4.0}) {
    Tensor p = core::softmax(z, t);
    for (std::size_t i = 0; i < 3; ++i) CHECK((p.at(i, 1) > p.at(i, 0)) == (z.at(i, 1) > z.at(i, 0)));
  }
}

text::TokenizedText tagged_text(const std::vector<int32_t>& tags) {
  text::TokenizedText t;
  for (std::size_t w = 0; w < tags.size(); ++w) {
    t.words.push_back("w" + std::to_string(w));
    for (int piece = 0; piece < 2; ++piece) {
      t.ids.push_back(10 + static_cast<int32_t>(w));
      t.pieces.push_back(piece ? "##x" : t.words.back());
      t.word_index.push_back(static_cast<int32_t>(w));
      t.ner.push_back(tags[w]);
    }
  }
  return t;
}

TEST_CASE("word drop") {
  Rng rng(4);
  text::TokenizedText t = tagged_text({0, 1, 0, 6, 0});
  text::TokenizedText same = word_drop(t, 0.0, rng);
  CHECK(same.ids == t.ids);
  text::TokenizedText tagged_only = word_drop(t, 1.0, rng);
  CHECK(tagged_only.words == std::vector<std::string>{"w1", "w3"});
  CHECK(tagged_only.size() == 4);
  text::TokenizedText untagged = tagged_text({0, 0, 0});
  CHECK(word_drop(untagged, 1.0, rng).words.size() == 1);

  text::TokenizedText many = tagged_text(std::vector<int32_t>(10000, 0));
  const double kept = static_cast<double>(word_drop(many, 0.5, rng).words.size()) / 10000.0;
  CHECK(std::abs(kept - 0.5) <= 0.02);
  CHECK_THROWS_AS(word_drop(t, 1.5, rng), ParameterError);
}

TEST_CASE("in-batch negatives") {
  Rng rng(5);
  std::vector<batching::TokenizedPair> batch;
  for (int i = 0; i < 6; ++i) batch.push_back({random_tokens(rng, 3, 50), random_tokens(rng, 4, 50), 1});
  Rng a(7), b(7);
  auto out = in_batch_negatives(batch, a);
  CHECK(out.size() == 12);
  auto again = in_batch_negatives(batch, b);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i].item.ids == again[i].item.ids);
  for (std::size_t i = 6; i < 12; ++i) {
    CHECK(out[i].label == 0);
    CHECK(out[i].query.ids == batch[i - 6].query.ids);
    CHECK(out[i].item.ids != batch[i - 6].item.ids);
  }
  CHECK(in_batch_negatives(std::span(batch).first(1), rng).size() == 1);
  std::vector<batching::TokenizedPair> clones(3, batch[0]);
  CHECK(in_batch_negatives(clones, rng).size() == 3);
}

struct Toy {
  model::EncoderParams params;
  model::InputEncoding enc;
  std::vector<int> labels;
};

Toy make_toy(uint64_t seed, std::size_t n = 4, double init_std = 0.02) {
  model::ModelConfig c = tiny_config(30);
  c.init_std = init_std;
  Rng rng(seed);
  auto batch = random_batch(rng, n, {4, 6}, 4, 6, 30);
  return {model::init_params(c, seed), batching::to_encoding(batching::trim_batch(batch).batch), batch.labels};
}

TEST_CASE("train step runs exactly two encoder passes") {
  Toy toy = make_toy(1);
  TrainState state;
  state.params = toy.params;
  TrainConfig config;
  const uint64_t before = model::encoder_pass_count();
  train_step(state, toy.enc, toy.labels, 1.0, config);
  CHECK(model::encoder_pass_count() - before == 2);
  CHECK(state.step == 1);
}

TEST_CASE("reduction to the plain BCE trainer is bit identical") {
  Toy toy = make_toy(2);
  TrainConfig config;
  config.epsilon = 0.0;
  config.weights = {0.5, 0.0, 0.0};
  config.learning_rate = 1e-3;
  TrainState cat, plain;
  cat.params = toy.params;
  plain.params = toy.params;
  for (int step = 0; step < 5; ++step) {
    const double tau = step < 2 ? 4.0 : 1.0;
    LossBreakdown a = train_step(cat, toy.enc, toy.labels, tau, config);
    LossBreakdown b = bce_step(plain, toy.enc, toy.labels, tau, config);
    CHECK(a.total == b.total);
    CHECK(a.l_bce == a.l_ate);
    CHECK(a.l_adv == 0.0);
  }
  auto x = cat.params.all();
  auto y = plain.params.all();
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i]->value == y[i]->value);
}

TEST_CASE("breakdown total matches its components") {
  Toy toy = make_toy(3);
  TrainState state;
  state.params = toy.params;
  TrainConfig config;
  config.epsilon = 0.5;
  LossBreakdown b = train_step(state, toy.enc, toy.labels, 2.0, config);
  const LossBreakdown r = total_loss(b.l_bce, b.l_ate, b.l_adv, config.weights);
  CHECK(std::abs(r.total - b.total) <= 1e-12);
  CHECK(b.l_adv >= 0);
  CHECK(b.l_ate >= b.l_bce - 1e-9);
}

TEST_CASE("small perturbations ascend the loss") {
  TrainConfig config;
  config.epsilon = 1e-4;
  int ascended = 0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    Toy toy = make_toy(100 + static_cast<uint64_t>(trial), 2, 0.3);
    const LossBreakdown b = cat_losses(toy.params, toy.enc, toy.labels, 1.0, config, Rng(trial), true);
    ascended += b.l_ate >= b.l_bce - 1e-9;
  }
  CHECK(ascended >= trials * 99 / 100);
}

TEST_CASE("large perturbations visibly hurt a trained toy model") {
  Toy toy = make_toy(4, 8, 0.1);
  TrainState state;
  state.params = toy.params;
  TrainConfig config;
  config.objective = Objective::kBce;
  config.weights = {1.0, 0.0, 0.0};
  config.learning_rate = 3e-3;
  for (int i = 0; i < 150; ++i) bce_step(state, toy.enc, toy.labels, 1.0, config);
  config.epsilon = 10.0;
  const LossBreakdown b = cat_losses(state.params, toy.enc, toy.labels, 1.0, config, Rng(1), false);
  CHECK(b.l_ate > b.l_bce + 0.1);
}

TEST_CASE("loss decreases on a separable toy set") {
  // Label is 1 exactly when the item contains token 7.
  Rng rng(6);
  std::vector<batching::EncodedPair> rows;
  std::vector<int> labels;
  for (int i = 0; i < 16; ++i) {
    auto q = random_tokens(rng, 2, 20);
    auto t = random_tokens(rng, 3, 20);
    for (auto& id : t.ids) id = id == 7 ? 8 : id;
    const int y = i % 2;
    if (y) t.ids[rng.below(3)] = 7;
    rows.push_back(batching::encode_pair(q, t, {2, 3}));
    labels.push_back(y);
  }
  auto enc = batching::to_encoding(batching::make_batch(rows, labels, {2, 3}));
  model::ModelConfig c = tiny_config(20);
  TrainState state;
  state.params = model::init_params(c, 8);
  TrainConfig config;
  config.learning_rate = 3e-3;
  config.epsilon = 0.05;
  std::vector<double> totals;
  for (int step = 0; step < 200; ++step) totals.push_back(train_step(state, enc, labels, 1.0, config).total);
  double first = 0, last = 0;
  for (int i = 0; i < 10; ++i) first += totals[i], last += totals[190 + i];
  CHECK(last < 0.5 * first);
}

TEST_CASE("non-finite loss aborts with a dump") {
  Toy toy = make_toy(7);
  TrainState state;
  state.params = toy.params;
  state.params.classifier_w.value[0] = std::nan("");
  CHECK_THROWS_AS(train_step(state, toy.enc, toy.labels, 1.0, TrainConfig{}), NumericError);
}

TEST_CASE("config json round trip and validation") {
  TrainConfig c;
  c.objective = Objective::kBce;
  c.weights = {1, 0, 0};
  c.epsilon = 0.1;
  nlohmann::json j = c;
  TrainConfig back = j.get<TrainConfig>();
  CHECK(back.objective == Objective::kBce);
  CHECK(back.weights.bce == 1.0);
  CHECK(back.epsilon == 0.1);
  c.weights.adv = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  TrainConfig t;
  t.schedule.tau_min = 5;
  CHECK_THROWS_AS(t.validate(), ConfigError);
}

std::vector<batching::TokenizedPair> toy_pairs(Rng& rng, int n) {
  std::vector<batching::TokenizedPair> out;
  for (int i = 0; i < n; ++i) {
    auto q = random_tokens(rng, 2, 20);
    auto t = random_tokens(rng, 3, 20);
    const int y = i % 2;
    for (auto& id : t.ids) id = id == 7 ? 8 : id;
    if (y) t.ids[0] = 7;
    out.push_back({q, t, y});
  }
  return out;
}

TEST_CASE("train loop determinism and early stopping") {
  Rng rng(9);
  auto train = toy_pairs(rng, 24);
  auto valid = toy_pairs(rng, 12);
  TrainConfig config;
  config.batch_size = 8;
  config.epochs = 3;
  config.learning_rate = 2e-3;
  config.limits = {2, 3};
  model::ModelConfig c = tiny_config(20);
  std::ostringstream h1, h2;
  TrainResult a = train_loop(model::init_params(c, 1), train, valid, {}, config, &h1);
  TrainResult b = train_loop(model::init_params(c, 1), train, valid, {}, config, &h2);
  CHECK(h1.str() == h2.str());
  CHECK(a.steps == 9);
  CHECK(a.history.size() == 12);
  CHECK(a.history[0].contains("l_adv"));
  CHECK(a.history[3].contains("val_auc"));

  config.patience = 0;
  config.learning_rate = 1e-15;
  config.epochs = 5;
  TrainResult stalled = train_loop(model::init_params(c, 1), train, valid, {}, config);
  CHECK(stalled.epochs_run == 2);
  CHECK_THROWS_AS(train_loop(model::init_params(c, 1), {}, valid, {}, config), InputError);
}

TEST_CASE("ablation arms") {
  TrainConfig base;
  TrainConfig bce = base, at = base, cat = base;
  apply_arm(Arm::kBceOnly, bce);
  apply_arm(Arm::kAtOnly, at);
  apply_arm(Arm::kCat, cat);
  CHECK(bce.objective == Objective::kBce);
  CHECK(bce.schedule.tau_max == 1.0);
  CHECK(at.objective == Objective::kCat);
  CHECK(at.weights.adv == 0.0);
  CHECK(at.weights.ate == base.weights.ate);
  CHECK(at.schedule.tau_max == 1.0);
  CHECK(cat.weights.adv == base.weights.adv);
  CHECK(cat.schedule.tau_max == base.schedule.tau_max);
  CHECK(parse_arm("at") == Arm::kAtOnly);
  CHECK_THROWS_AS(parse_arm("mlm"), ConfigError);
}

TEST_CASE("ablation grid on a tiny corpus") {
  Recipe r = desk_recipe();
  r.splits = {60, 20, 20};
  r.vocab_top_k = 50;
  r.model.layers = 1;
  r.model.hidden = 16;
  r.model.heads = 2;
  r.model.head_dim = 8;
  r.model.ffn = 16;
  r.train.epochs = 1;
  r.train.batch_size = 16;
  const DeskData desk = prepare_desk(r);
  CHECK(desk.train.size() == 60);
  CHECK(desk.valid.size() == 20);
  CHECK(desk.test.size() == 20);

  AblationOptions o;
  o.seeds = {1};
  o.epsilons = {0.01, 0.1};
  const auto results = run_ablation(r, desk, o);
  REQUIRE(results.size() == 5);  // BCE-only once, the others per radius
  CHECK(results[0].arm == Arm::kBceOnly);
  CHECK(results[1].epsilon == 0.01);
  CHECK(results[2].epsilon == 0.1);
  for (const auto& x : results) CHECK((x.test_auc >= 0.0 && x.test_auc <= 1.0));
  r.train.epsilon = 0.1;
  CHECK(run_arm(r, desk, Arm::kCat, 1).test_auc == results[4].test_auc);
  const std::string table = format_ablation(results);
  CHECK(table.find("BCE-only") != std::string::npos);
  CHECK(std::count(table.begin(), table.end(), '\n') == 6);
}

}  // namespace
}  // namespace srel::train
