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

#include "srel/model/encoder.h"

#include <cmath>
#include <string>

#include "srel/common/errors.h"
#include "srel/core/flops.h"
#include "srel/core/ops.h"

namespace srel::model {
namespace {

using core::FlopKind;
using core::FlopScope;
using core::Shape;
using core::Tape;
using core::Tensor;
using core::Var;
namespace ops = core::ops;

thread_local uint64_t t_encoder_passes = 0;

Parameter normal_param(std::string name, Shape shape, double stddev, core::Rng& rng) {
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = rng.truncated_normal(stddev);
  return Parameter(std::move(name), std::move(t));
}

Parameter filled_param(std::string name, Shape shape, double value) {
  Tensor t(std::move(shape));
  t.fill(value);
  return Parameter(std::move(name), std::move(t));
}

}  // namespace

std::vector<Parameter*> EncoderParams::all() {
  std::vector<Parameter*> out = {&token_embedding,   &segment_embedding, &position_embedding,
                                 &ner_embedding,     &embed_ln_gamma,    &embed_ln_beta};
  for (LayerParams& p : layers) {
    for (Parameter* q : {&p.wq, &p.bq, &p.wk, &p.bk, &p.wv, &p.bv, &p.wo, &p.bo, &p.attn_ln_gamma,
                         &p.attn_ln_beta, &p.ffn_in_w, &p.ffn_in_b, &p.ffn_out_w, &p.ffn_out_b, &p.ffn_ln_gamma,
                         &p.ffn_ln_beta}) {
      out.push_back(q);
    }
  }
  out.push_back(&classifier_w);
  out.push_back(&classifier_b);
  return out;
}

std::vector<const Parameter*> EncoderParams::all() const {
  std::vector<const Parameter*> out;
  for (Parameter* p : const_cast<EncoderParams*>(this)->all()) out.push_back(p);
  return out;
}

std::size_t EncoderParams::parameter_count() const {
  std::size_t total = 0;
  for (const Parameter* p : all()) total += p->value.size();
  return total;
}

void EncoderParams::zero_grad() {
  for (Parameter* p : all()) p->zero_grad();
}

EncoderParams init_params(const ModelConfig& config, uint64_t seed) {
  config.validate();
  core::Rng rng(seed);
  const double s = config.init_std;
  const std::size_t d = config.hidden, k = config.ffn;
  EncoderParams p;
  p.config = config;
  p.token_embedding = normal_param("embed.token", {config.vocab_size, d}, s, rng);
  p.segment_embedding = normal_param("embed.segment", {config.segments, d}, s, rng);
  p.position_embedding = normal_param("embed.position", {config.max_positions, d}, s, rng);
  p.ner_embedding = normal_param("embed.ner", {config.ner_tags, d}, s, rng);
  p.embed_ln_gamma = filled_param("embed.ln.gamma", {d}, 1.0);
  p.embed_ln_beta = filled_param("embed.ln.beta", {d}, 0.0);
  for (std::size_t i = 0; i < config.layers; ++i) {
    const std::string pre = "layer" + std::to_string(i) + ".";
    LayerParams l;
    l.wq = normal_param(pre + "attn.wq", {d, d}, s, rng);
    l.bq = filled_param(pre + "attn.bq", {d}, 0.0);
    l.wk = normal_param(pre + "attn.wk", {d, d}, s, rng);
    l.bk = filled_param(pre + "attn.bk", {d}, 0.0);
    l.wv = normal_param(pre + "attn.wv", {d, d}, s, rng);
    l.bv = filled_param(pre + "attn.bv", {d}, 0.0);
    l.wo = normal_param(pre + "attn.wo", {d, d}, s, rng);
    l.bo = filled_param(pre + "attn.bo", {d}, 0.0);
    l.attn_ln_gamma = filled_param(pre + "attn.ln.gamma", {d}, 1.0);
    l.attn_ln_beta = filled_param(pre + "attn.ln.beta", {d}, 0.0);
    l.ffn_in_w = normal_param(pre + "ffn.in.w", {d, k}, s, rng);
    l.ffn_in_b = filled_param(pre + "ffn.in.b", {k}, 0.0);
    l.ffn_out_w = normal_param(pre + "ffn.out.w", {k, d}, s, rng);
    l.ffn_out_b = filled_param(pre + "ffn.out.b", {d}, 0.0);
    l.ffn_ln_gamma = filled_param(pre + "ffn.ln.gamma", {d}, 1.0);
    l.ffn_ln_beta = filled_param(pre + "ffn.ln.beta", {d}, 0.0);
    p.layers.push_back(std::move(l));
  }
  p.classifier_w = normal_param("classifier.w", {d, 2}, s, rng);
  p.classifier_b = filled_param("classifier.b", {2}, 0.0);
  return p;
}

InputEncoding::InputEncoding(std::size_t rows, std::size_t cols)
    : n(rows),
      l(cols),
      tokens(rows * cols, 0),
      segments(rows * cols, 0),
      positions(rows * cols, 0),
      ner(rows * cols, 0),
      mask(rows * cols, 0) {}

void InputEncoding::validate() const {
  const std::size_t cells = n * l;
  if (tokens.size() != cells || segments.size() != cells || positions.size() != cells || ner.size() != cells ||
      mask.size() != cells) {
    throw DimensionError("input encoding: id grids do not match " + std::to_string(n) + "x" + std::to_string(l));
  }
  for (std::size_t i = 0; i < cells; ++i) {
    if ((mask[i] != 0) != (tokens[i] != 0)) {
      throw DimensionError("input encoding: mask disagrees with [PAD] at cell " + std::to_string(i));
    }
  }
}

uint64_t encoder_pass_count() { return t_encoder_passes; }

Var embed(Tape& tape, EncoderParams& params, const InputEncoding& enc, bool training, core::Rng& rng) {
  enc.validate();
  const ModelConfig& c = params.config;
  if (enc.l > c.max_positions) {
    throw ConfigError("forward: sequence length " + std::to_string(enc.l) + " exceeds max positions " +
                      std::to_string(c.max_positions));
  }
  Var tok = ops::embedding_gather(tape.parameter(params.token_embedding), enc.tokens);
  Var seg = ops::embedding_gather(tape.parameter(params.segment_embedding), enc.segments);
  Var pos = ops::embedding_gather(tape.parameter(params.position_embedding), enc.positions);
  Var ner = ops::embedding_gather(tape.parameter(params.ner_embedding), enc.ner);
  Var sum = ops::add(ops::add(ops::add(tok, seg), pos), ner);
  Var normed =
      ops::layer_norm(sum, tape.parameter(params.embed_ln_gamma), tape.parameter(params.embed_ln_beta));
  return ops::dropout(normed, c.dropout, rng, training);
}

Var encode(Tape& tape, EncoderParams& params, const InputEncoding& enc, const Var& x, bool training,
           core::Rng& rng) {
  ++t_encoder_passes;
  const ModelConfig& c = params.config;
  Var h = x;
  for (LayerParams& lp : params.layers) {
    Var attn;
    {
      FlopScope scope(FlopKind::kProjection);
      Var q = ops::linear(h, tape.parameter(lp.wq), tape.parameter(lp.bq));
      Var k = ops::linear(h, tape.parameter(lp.wk), tape.parameter(lp.bk));
      Var v = ops::linear(h, tape.parameter(lp.wv), tape.parameter(lp.bv));
      Var ctx = ops::attention(q, k, v, enc.mask, enc.n, enc.l, c.heads);
      attn = ops::linear(ctx, tape.parameter(lp.wo), tape.parameter(lp.bo));
    }
    attn = ops::dropout(attn, c.dropout, rng, training);
    h = ops::layer_norm(ops::add(h, attn), tape.parameter(lp.attn_ln_gamma), tape.parameter(lp.attn_ln_beta));
    Var ff;
    {
      FlopScope scope(FlopKind::kFeedForward);
      Var inner = ops::gelu(ops::linear(h, tape.parameter(lp.ffn_in_w), tape.parameter(lp.ffn_in_b)));
      ff = ops::linear(inner, tape.parameter(lp.ffn_out_w), tape.parameter(lp.ffn_out_b));
    }
    ff = ops::dropout(ff, c.dropout, rng, training);
    h = ops::layer_norm(ops::add(h, ff), tape.parameter(lp.ffn_ln_gamma), tape.parameter(lp.ffn_ln_beta));
  }
  std::vector<std::size_t> cls_rows(enc.n);
  for (std::size_t i = 0; i < enc.n; ++i) cls_rows[i] = i * enc.l;
  Var cls = ops::select_rows(h, cls_rows);
  return ops::linear(cls, tape.parameter(params.classifier_w), tape.parameter(params.classifier_b));
}

Tensor forward(const EncoderParams& params, const InputEncoding& enc, bool training, core::Rng& rng) {
  Tape tape(Tape::Mode::kInference);
  // The inference tape never writes to parameters.
  EncoderParams& p = const_cast<EncoderParams&>(params);
  Var x = embed(tape, p, enc, training, rng);
  return encode(tape, p, enc, x, training, rng).value();
}

Tensor forward(const EncoderParams& params, const InputEncoding& enc) {
  core::Rng rng(0);
  return forward(params, enc, false, rng);
}

double relevance_score(double z0, double z1, double temperature) {
  if (!(temperature > 0.0)) throw ParameterError("relevance_score: temperature must be positive");
  const double t = temperature * (z1 - z0);
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

std::vector<double> relevance_score(const Tensor& logits, double temperature) {
  if (logits.rank() != 2 || logits.cols() != 2) {
    throw DimensionError("relevance_score: expected [n x 2] logits, got " + core::shape_string(logits.shape()));
  }
  std::vector<double> out(logits.rows());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = relevance_score(logits.at(i, 0), logits.at(i, 1), temperature);
  return out;
}

}  // namespace srel::model
