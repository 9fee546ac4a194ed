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

#ifndef SREL_TRAIN_TRAINER_H_
#define SREL_TRAIN_TRAINER_H_

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "json.hpp"
#include "srel/batching/batch.h"
#include "srel/model/encoder.h"
#include "srel/train/adam.h"
#include "srel/train/augment.h"
#include "srel/train/losses.h"

namespace srel::train {

enum class Objective { kCat, kBce };

struct TrainConfig {
  Objective objective = Objective::kCat;
  double learning_rate = 2e-5;
  std::size_t batch_size = 1024;
  std::size_t epochs = 3;
  std::size_t patience = 1;
  LossWeights weights;
  double epsilon = 0.05;
  TemperatureSchedule schedule;
  double word_drop = 0.0;
  bool in_batch_negatives = false;
  uint64_t seed = 1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  // Global gradient-norm cap; 0 disables.
  double clip_norm = 0.0;
  // Linear learning-rate ramp over the first steps; 0 disables.
  std::size_t warmup_steps = 0;
  // Decay the learning rate linearly to zero over the run (after warmup).
  bool linear_decay = false;
  bool trim = true;
  batching::SegmentLimits limits;
  std::size_t eval_batch_size = 128;

  // Throws ConfigError for negative weights or epsilon, a bad schedule, or zero sizes.
  void validate() const;
  // total_steps = 0 means the run length is unknown; decay is then skipped.
  double learning_rate_at(uint64_t step, uint64_t total_steps = 0) const;
  AdamConfig adam(uint64_t step, uint64_t total_steps = 0) const {
    return {learning_rate_at(step, total_steps), beta1, beta2, adam_eps};
  }
};

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

struct TrainState {
  model::EncoderParams params;
  AdamState adam;
  uint64_t step = 0;
  // Planned run length for learning-rate decay; 0 if unknown.
  uint64_t total_steps = 0;
  double best_auc = -1.0;
  std::size_t epochs_since_improvement = 0;
};

// Two encoder passes: clean x, then x + r_adv with the same dropout stream.
// One Adam update on a1*L_BCE + a2*L_ATE + a3*L_ADV. Throws NumericError (and
// dumps the batch to a JSON file) on a non-finite loss.
LossBreakdown train_step(TrainState& state, const model::InputEncoding& enc, std::span<const int> labels,
                         double temperature, const TrainConfig& config);

// The losses train_step would see, without updating anything.
LossBreakdown cat_losses(model::EncoderParams& params, const model::InputEncoding& enc, std::span<const int> labels,
                         double temperature, const TrainConfig& config, core::Rng rng, bool training = true);

// Plain trainer: one pass, one Adam update on a1*L_BCE.
LossBreakdown bce_step(TrainState& state, const model::InputEncoding& enc, std::span<const int> labels,
                       double temperature, const TrainConfig& config);

struct TrainResult {
  model::EncoderParams best;
  std::vector<nlohmann::json> history;
  double best_auc = -1.0;
  std::size_t epochs_run = 0;
  uint64_t steps = 0;
};

// Epoch loop with length bucketing, per-epoch validation AUC and early
// stopping. Each history record is also written to `history` as a JSON line.
TrainResult train_loop(model::EncoderParams init, std::span<const batching::TokenizedPair> train,
                       std::span<const batching::TokenizedPair> validation, batching::SpecialIds specials,
                       const TrainConfig& config, std::ostream* history = nullptr);

}  // namespace srel::train

#endif  // SREL_TRAIN_TRAINER_H_
