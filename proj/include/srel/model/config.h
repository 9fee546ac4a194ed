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

#ifndef SREL_MODEL_CONFIG_H_
#define SREL_MODEL_CONFIG_H_

#include <cstddef>
#include <cstdint>

#include "json.hpp"

namespace srel::model {

// Cross-encoder hyperparameters. Defaults give the L3-H128-A4 variant.
struct ModelConfig {
  std::size_t layers = 3;          // L
  std::size_t hidden = 128;        // d
  std::size_t heads = 4;           // m
  std::size_t head_dim = 32;       // a
  std::size_t ffn = 512;           // k
  std::size_t vocab_size = 0;
  std::size_t max_positions = 64;
  std::size_t ner_tags = 7;
  std::size_t segments = 2;
  double dropout = 0.1;
  double temperature = 1.0;        // default heated-softmax tau for scoring
  double init_std = 0.02;

  // Throws ConfigError when d != m*a, a size is zero, or dropout/tau are out of range.
  void validate() const;
  // Throws ConfigError unless max_positions >= l_q + l_i + 3.
  void require_layout(std::size_t query_limit, std::size_t item_limit) const;

  bool operator==(const ModelConfig&) const = default;
};

void to_json(nlohmann::json& j, const ModelConfig& c);
void from_json(const nlohmann::json& j, ModelConfig& c);

// Closed-form forward FLOPs of the attention and FFN sub-layers.
//   mha = L * c_mha * n * l^2 * d * m with c_mha = 4/m   (QK^T and PV products)
//   ffn = L * c_ffn * n * l * k * m with c_ffn = 4a      (two d x k products)
// Both reduce to the multiply-add counts the kernels perform (2 flops per MAC).
struct ComplexityEstimate {
  double mha_flops = 0;
  double ffn_flops = 0;
};

ComplexityEstimate complexity_estimate(const ModelConfig& config, std::size_t n, std::size_t l);

}  // namespace srel::model

#endif  // SREL_MODEL_CONFIG_H_
