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

#ifndef SREL_CORE_OPS_H_
#define SREL_CORE_OPS_H_

#include <cstdint>
#include <span>

#include "srel/core/rng.h"
#include "srel/core/tape.h"

// Differentiable primitives. Each records itself on the tape of its inputs and
// accumulates (never overwrites) input gradients during the reverse sweep.
namespace srel::core::ops {

// Additive attention bias for masked key positions.
inline constexpr double kMaskBias = -1e9;

Var matmul(const Var& a, const Var& b);                  // [n x p] @ [p x q]
Var linear(const Var& x, const Var& w, const Var& bias);  // x @ w + bias (bias broadcast over rows)
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, double factor);
Var sum(const Var& a);
Var mean(const Var& a);

// Row-wise over the last dimension: gamma * (x - mu) / sqrt(var + eps) + beta.
Var layer_norm(const Var& x, const Var& gamma, const Var& beta, double eps = 1e-12);
// Exact (erf) form.
Var gelu(const Var& x);
// Inverted dropout: survivors are scaled by 1/(1-rate). Identity when not training.
Var dropout(const Var& x, double rate, Rng& rng, bool training);
// Rows of `table` selected by ids; the gradient scatters back into those rows.
Var embedding_gather(const Var& table, std::span<const int32_t> ids);
Var select_rows(const Var& x, std::span<const std::size_t> rows);
// out[i] = x[i, cols[i]] for x of shape [n x c].
Var pick(const Var& x, std::span<const int> cols);

// Row-wise heated softmax exp(t*z_i) / sum_j exp(t*z_j).
Var softmax(const Var& z, double temperature = 1.0);
Var log_softmax(const Var& z, double temperature = 1.0);
// Mean negative log-likelihood of softmax(logits) at the integer labels.
Var cross_entropy(const Var& logits, std::span<const int> labels);
// log(max(x, floor)); no gradient where the floor is active.
Var log_floor(const Var& x, double floor);
// (1/2n) sum_rows sum_c (p - q)(log(p + f) - log(q + f)), i.e. the mean of
// D(p||q) + D(q||p) over rows with the floor f added under each log.
Var symmetric_kl(const Var& p, const Var& q, double floor = 1e-12);

// Masked multi-head scaled dot-product attention on [batch*seq x d] inputs.
// mask is [batch x seq] with 1 for real keys; masked keys get kMaskBias.
Var attention(const Var& q, const Var& k, const Var& v, std::span<const uint8_t> mask,
              std::size_t batch, std::size_t seq, std::size_t heads);

}  // namespace srel::core::ops

#endif  // SREL_CORE_OPS_H_
