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

#include "srel/train/ablation.h"

#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>

#include "srel/common/errors.h"
#include "srel/common/log.h"
#include "srel/data/tokenize.h"
#include "srel/eval/metrics.h"
#include "srel/eval/report.h"
#include "srel/text/vocab_builder.h"

namespace srel::train {

const char* arm_name(Arm arm) {
  switch (arm) {
    case Arm::kBceOnly: return "BCE-only";
    case Arm::kAtOnly: return "AT-only";
    case Arm::kCat: return "CAT";
  }
  return "?";
}

Arm parse_arm(const std::string& name) {
  if (name == "bce") return Arm::kBceOnly;
  if (name == "at") return Arm::kAtOnly;
  if (name == "cat") return Arm::kCat;
  throw ConfigError("unknown arm '" + name + "' (bce, at or cat)");
}

void apply_arm(Arm arm, TrainConfig& config) {
  switch (arm) {
    case Arm::kBceOnly:
      config.objective = Objective::kBce;
      config.schedule.tau_max = 1.0;
      break;
    case Arm::kAtOnly:
      config.weights.adv = 0.0;
      config.schedule.tau_max = 1.0;
      break;
    case Arm::kCat:
      break;
  }
}

DeskData prepare_desk(const Recipe& recipe) {
  DeskData out;
  data::GenConfig gen = recipe.gen;
  gen.n_pairs = recipe.splits.total();
  out.corpus = data::generate_corpus(gen);
  const auto& s = recipe.splits;
  const auto& p = out.corpus.pairs;
  out.train_pairs.assign(p.begin(), p.begin() + s.train);
  out.valid_pairs.assign(p.begin() + s.train, p.begin() + s.train + s.valid);
  out.test_pairs.assign(p.begin() + s.train + s.valid, p.end());
  std::vector<std::string> texts;
  for (const auto& x : out.train_pairs) texts.push_back(x.query), texts.push_back(x.title);
  out.base = data::default_base_vocab();
  out.tokenizer =
      text::Tokenizer(text::build_extended_vocab(text::count_words(texts), out.base, recipe.vocab_top_k), out.corpus.lexicon);
  out.train = data::tokenize_pairs(out.train_pairs, out.tokenizer);
  out.valid = data::tokenize_pairs(out.valid_pairs, out.tokenizer);
  out.test = data::tokenize_pairs(out.test_pairs, out.tokenizer);
  return out;
}

void to_json(nlohmann::json& j, const ArmResult& r) {
  j = {{"arm", arm_name(r.arm)}, {"seed", r.seed},         {"epsilon", r.epsilon}, {"test_auc", r.test_auc},
       {"valid_auc", r.valid_auc}, {"epochs", r.epochs}, {"seconds", r.seconds}};
}

ArmResult run_arm(const Recipe& recipe, const DeskData& desk, Arm arm, uint64_t seed) {
  TrainConfig tc = recipe.train;
  tc.seed = seed;
  apply_arm(arm, tc);
  model::ModelConfig mc = recipe.model;
  mc.vocab_size = desk.tokenizer.vocab().size();
  const auto t0 = std::chrono::steady_clock::now();
  const auto specials = batching::special_ids(desk.tokenizer.vocab());
  const auto trained = train_loop(model::init_params(mc, seed), desk.train, desk.valid, specials, tc);
  eval::PredictOptions po;
  po.specials = specials;
  const auto scores = eval::predict(trained.best, desk.test, po);
  std::vector<int> labels;
  for (const auto& p : desk.test) labels.push_back(p.label);
  ArmResult r;
  r.arm = arm;
  r.seed = seed;
  r.epsilon = tc.epsilon;
  r.test_auc = eval::auc(scores, labels);
  r.valid_auc = trained.best_auc;
  r.epochs = trained.epochs_run;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  SREL_LOG_INFO << arm_name(arm) << " seed " << seed << " eps " << tc.epsilon << ": test AUC " << r.test_auc
                << ", valid AUC " << r.valid_auc << ", " << r.seconds << " s";
  return r;
}

std::vector<ArmResult> run_ablation(const Recipe& recipe, const DeskData& desk, const AblationOptions& options) {
  std::vector<double> radii = options.epsilons;
  if (radii.empty()) radii.push_back(recipe.train.epsilon);
  std::vector<ArmResult> out;
  for (uint64_t seed : options.seeds) {
    for (Arm arm : options.arms) {
      for (std::size_t i = 0; i < radii.size(); ++i) {
        if (arm == Arm::kBceOnly && i > 0) break;
        Recipe r = recipe;
        r.train.epsilon = radii[i];
        out.push_back(run_arm(r, desk, arm, seed));
      }
    }
  }
  return out;
}

std::string format_ablation(const std::vector<ArmResult>& results) {
  struct Acc {
    double sum = 0, seconds = 0;
    std::size_t n = 0;
  };
  std::map<std::pair<int, double>, Acc> groups;
  for (const auto& r : results) {
    auto& a = groups[{static_cast<int>(r.arm), r.arm == Arm::kBceOnly ? 0.0 : r.epsilon}];
    a.sum += r.test_auc;
    a.seconds += r.seconds;
    ++a.n;
  }
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %10s %6s %14s %10s\n", "arm", "epsilon", "seeds", "mean test AUC", "minutes");
  os << line;
  for (const auto& [key, a] : groups) {
    const auto arm = static_cast<Arm>(key.first);
    const std::string eps = arm == Arm::kBceOnly ? "-" : std::to_string(key.second).substr(0, 6);
    std::snprintf(line, sizeof line, "%-10s %10s %6zu %14.4f %10.1f\n", arm_name(arm), eps.c_str(), a.n,
                  a.sum / a.n, a.seconds / 60);
    os << line;
  }
  return os.str();
}

}  // namespace srel::train
