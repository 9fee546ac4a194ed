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

#ifndef SREL_TRAIN_RECIPE_H_
#define SREL_TRAIN_RECIPE_H_

#include <cstdint>
#include <filesystem>

#include "json.hpp"
#include "srel/data/generator.h"
#include "srel/model/config.h"
#include "srel/train/trainer.h"

namespace srel::train {

struct Splits {
  std::size_t train = 10000;
  std::size_t valid = 1000;
  std::size_t test = 2000;
  std::size_t total() const { return train + valid + test; }
};

// Everything needed to go from generator settings to a trained checkpoint.
struct Recipe {
  data::GenConfig gen;
  model::ModelConfig model;
  TrainConfig train;
  Splits splits;
  std::size_t vocab_top_k = 1000;

  void validate() const;
};

// Settings that train the default model on one CPU core in minutes.
Recipe desk_recipe();

// Overlays a flat key-value document. Keys are field names of GenConfig,
// ModelConfig or TrainConfig (a shared key such as "seed" sets every owner),
// plus "train_pairs", "valid_pairs", "test_pairs" and "vocab_top_k". Unknown
// keys are a ConfigError.
void apply_flat_config(const nlohmann::json& flat, Recipe& recipe);
Recipe load_recipe(const std::filesystem::path& path, Recipe base = desk_recipe());

// Flat document with every key; apply_flat_config of it is the identity.
nlohmann::json flat_config(const Recipe& recipe);

}  // namespace srel::train

#endif  // SREL_TRAIN_RECIPE_H_
