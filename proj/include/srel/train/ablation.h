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

// Objective ablation: BCE-only, AT-only and CAT arms trained on one desk
// corpus, optionally across several perturbation radii.

#ifndef SREL_TRAIN_ABLATION_H_
#define SREL_TRAIN_ABLATION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "srel/batching/batch.h"
#include "srel/data/generator.h"
#include "srel/text/wordpiece.h"
#include "srel/train/recipe.h"

namespace srel::train {

enum class Arm { kBceOnly, kAtOnly, kCat };

const char* arm_name(Arm arm);
Arm parse_arm(const std::string& name);  // "bce", "at" or "cat"

// BCE-only: plain cross-entropy at tau 1. AT-only: clean and perturbed BCE
// without the KL term, tau 1. CAT: the recipe unchanged.
void apply_arm(Arm arm, TrainConfig& config);

// Generated corpus split per `recipe.splits`, with the vocabulary extended
// from the training split only.
struct DeskData {
  data::Corpus corpus;
  std::vector<data::LabeledPair> train_pairs, valid_pairs, test_pairs;
  text::Vocabulary base;
  text::Tokenizer tokenizer;
  std::vector<batching::TokenizedPair> train, valid, test;
};

DeskData prepare_desk(const Recipe& recipe);

struct ArmResult {
  Arm arm = Arm::kCat;
  uint64_t seed = 0;
  double epsilon = 0;
  double test_auc = 0;
  double valid_auc = 0;
  std::size_t epochs = 0;
  double seconds = 0;  // training plus test scoring
};

void to_json(nlohmann::json& j, const ArmResult& r);

// Trains from `recipe.train` with `seed` and the arm applied, selects the
// epoch with the best validation AUC and scores the test split.
ArmResult run_arm(const Recipe& recipe, const DeskData& desk, Arm arm, uint64_t seed);

struct AblationOptions {
  std::vector<Arm> arms = {Arm::kBceOnly, Arm::kAtOnly, Arm::kCat};
  std::vector<uint64_t> seeds = {1, 2, 3};
  std::vector<double> epsilons;  // empty: recipe value only
};

// BCE-only ignores epsilon and runs once per seed.
std::vector<ArmResult> run_ablation(const Recipe& recipe, const DeskData& desk, const AblationOptions& options);

// Mean test AUC per (arm, epsilon), one line each.
std::string format_ablation(const std::vector<ArmResult>& results);

}  // namespace srel::train

#endif  // SREL_TRAIN_ABLATION_H_
