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

#include "srel/train/adam.h"

#include <cmath>

namespace srel::train {

double clip_grad_norm(model::EncoderParams& params, double max_norm) {
  double sq = 0.0;
  for (const core::Parameter* p : params.all()) {
    const double* g = p->grad.data();
    for (std::size_t i = 0; i < p->grad.size(); ++i) sq += g[i] * g[i];
  }
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (core::Parameter* p : params.all()) {
      double* g = p->grad.data();
      for (std::size_t i = 0; i < p->grad.size(); ++i) g[i] *= scale;
    }
  }
  return norm;
}

void adam_step(model::EncoderParams& params, AdamState& state, const AdamConfig& c) {
  std::vector<core::Parameter*> all = params.all();
  if (state.m.size() != all.size()) {
    state.m.clear();
    state.v.clear();
    for (const core::Parameter* p : all) {
      state.m.push_back(core::Tensor::zeros_like(p->value));
      state.v.push_back(core::Tensor::zeros_like(p->value));
    }
    state.t = 0;
  }
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double c1 = 1.0 - std::pow(c.beta1, t);
  const double c2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t k = 0; k < all.size(); ++k) {
    core::Parameter& p = *all[k];
    double* w = p.value.data();
    double* g = p.grad.data();
    double* m = state.m[k].data();
    double* v = state.v[k].data();
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
      w[i] -= c.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + c.eps);
      g[i] = 0.0;
    }
  }
}

}  // namespace srel::train
