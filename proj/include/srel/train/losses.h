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

#ifndef SREL_TRAIN_LOSSES_H_
#define SREL_TRAIN_LOSSES_H_

#include <span>

#include "json.hpp"
#include "srel/core/tape.h"
#include "srel/core/tensor.h"

namespace srel::train {

inline constexpr double kProbabilityFloor = 1e-12;

struct LossWeights {
  double bce = 0.5;  // alpha_1
  double ate = 0.5;  // alpha_2
  double adv = 0.01;  // alpha_3
};

struct LossBreakdown {
  double l_bce = 0;
  double l_ate = 0;
  double l_adv = 0;
  double total = 0;
};

void to_json(nlohmann::json& j, const LossBreakdown& b);

// -(1/N) sum log p(y_i) with p(1) = probs[i], p(0) = 1 - probs[i], floored at 1e-12.
double bce_loss(std::span<const double> probs, std::span<const int> labels);

// -(1/N) sum log p[i, y_i] for an [n x 2] probability tensor.
double bce_loss(const core::Tensor& probs, std::span<const int> labels);

// Per pair: r = -epsilon * g / ||g||_2 over that pair's rows_per_pair x d slice
// of `grad` ([n*rows_per_pair x d]). Zero-gradient pairs get a zero perturbation.
core::Tensor adversarial_perturbation(const core::Tensor& grad, std::size_t pairs, double epsilon);

// (1/2N) sum_i [KL(p_i||q_i) + KL(q_i||p_i)] on [n x 2] distributions. Throws
// ContractError when a row does not sum to 1 within 1e-6.
double adv_kl_loss(const core::Tensor& p, const core::Tensor& q);

LossBreakdown total_loss(double l_bce, double l_ate, double l_adv, const LossWeights& w);

// Graph forms used by the trainer.
core::Var bce_loss(const core::Var& probs, std::span<const int> labels);
core::Var log_likelihood(const core::Var& probs, std::span<const int> labels);

}  // namespace srel::train

#endif  // SREL_TRAIN_LOSSES_H_
