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

#ifndef SREL_MODEL_ENCODER_H_
#define SREL_MODEL_ENCODER_H_

#include <cstdint>
#include <vector>

#include "srel/core/rng.h"
#include "srel/core/tape.h"
#include "srel/model/config.h"

namespace srel::model {

using core::Parameter;

struct LayerParams {
  Parameter wq, bq, wk, bk, wv, bv, wo, bo;
  Parameter attn_ln_gamma, attn_ln_beta;
  Parameter ffn_in_w, ffn_in_b, ffn_out_w, ffn_out_b;
  Parameter ffn_ln_gamma, ffn_ln_beta;
};

struct EncoderParams {
  ModelConfig config;
  Parameter token_embedding, segment_embedding, position_embedding, ner_embedding;
  Parameter embed_ln_gamma, embed_ln_beta;
  std::vector<LayerParams> layers;
  Parameter classifier_w, classifier_b;

  // Stable traversal order; used by the optimizer and checkpoints.
  std::vector<Parameter*> all();
  std::vector<const Parameter*> all() const;
  std::size_t parameter_count() const;
  void zero_grad();
};

// Truncated normal (stddev config.init_std, cut at 2 sigma) for matrices and
// embedding tables, ones/zeros for layer norms, zero biases.
EncoderParams init_params(const ModelConfig& config, uint64_t seed);

// Row-major [n x l] id grids. mask is 1 exactly where token != [PAD].
struct InputEncoding {
  std::size_t n = 0;
  std::size_t l = 0;
  std::vector<int32_t> tokens;
  std::vector<int32_t> segments;
  std::vector<int32_t> positions;
  std::vector<int32_t> ner;
  std::vector<uint8_t> mask;

  InputEncoding() = default;
  InputEncoding(std::size_t rows, std::size_t cols);
  // Throws DimensionError on inconsistent sizes or a mask/token disagreement.
  void validate() const;
};

// Number of encoder stacks run on this thread (one per encode() call).
uint64_t encoder_pass_count();

// Summed embeddings -> layer norm -> dropout; the [n*l x d] input x of the layers.
core::Var embed(core::Tape& tape, EncoderParams& params, const InputEncoding& enc, bool training,
                core::Rng& rng);

// Encoder layers plus the [CLS] classifier applied to x; returns [n x 2] logits.
core::Var encode(core::Tape& tape, EncoderParams& params, const InputEncoding& enc, const core::Var& x,
                 bool training, core::Rng& rng);

// embed + encode on an inference tape.
core::Tensor forward(const EncoderParams& params, const InputEncoding& enc, bool training, core::Rng& rng);
core::Tensor forward(const EncoderParams& params, const InputEncoding& enc);

// p(relevant) = exp(t*z1) / (exp(t*z0) + exp(t*z1)) per row of [n x 2] logits.
std::vector<double> relevance_score(const core::Tensor& logits, double temperature);
double relevance_score(double z0, double z1, double temperature);

}  // namespace srel::model

#endif  // SREL_MODEL_ENCODER_H_
