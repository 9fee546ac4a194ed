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

#ifndef SREL_TRAIN_ADAM_H_
#define SREL_TRAIN_ADAM_H_

#include <cstdint>
#include <vector>

#include "srel/model/encoder.h"

namespace srel::train {

struct AdamConfig {
  double learning_rate = 2e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<core::Tensor> m;
  std::vector<core::Tensor> v;
  uint64_t t = 0;
};

// Rescales all grads so their joint L2 norm is at most max_norm; returns the
// norm before scaling. max_norm <= 0 leaves the grads alone.
double clip_grad_norm(model::EncoderParams& params, double max_norm);

// One bias-corrected Adam update from the accumulated grads; grads are zeroed.
void adam_step(model::EncoderParams& params, AdamState& state, const AdamConfig& config);

}  // namespace srel::train

#endif  // SREL_TRAIN_ADAM_H_
