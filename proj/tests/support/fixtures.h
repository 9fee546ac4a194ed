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

#ifndef SREL_TESTS_SUPPORT_FIXTURES_H_
#define SREL_TESTS_SUPPORT_FIXTURES_H_

#include <vector>

#include "srel/batching/batch.h"
#include "srel/core/rng.h"
#include "srel/model/config.h"
#include "srel/text/wordpiece.h"

namespace srel::testing {

inline text::TokenizedText random_tokens(core::Rng& rng, std::size_t len, int32_t vocab_size) {
  text::TokenizedText t;
  for (std::size_t i = 0; i < len; ++i) {
    const int32_t id = 5 + static_cast<int32_t>(rng.below(static_cast<uint64_t>(vocab_size - 5)));
    t.words.push_back("w" + std::to_string(id));
    t.ids.push_back(id);
    t.pieces.push_back(t.words.back());
    t.word_index.push_back(static_cast<int32_t>(i));
    t.ner.push_back(static_cast<int32_t>(rng.below(7)));
  }
  return t;
}

// n random pairs with query lengths in [1, max_q] and item lengths in [1, max_i].
inline batching::PairBatch random_batch(core::Rng& rng, std::size_t n, batching::SegmentLimits limits,
                                        std::size_t max_q, std::size_t max_i, int32_t vocab_size) {
  std::vector<batching::EncodedPair> rows;
  std::vector<int> labels;
  for (std::size_t r = 0; r < n; ++r) {
    auto q = random_tokens(rng, 1 + rng.below(max_q), vocab_size);
    auto t = random_tokens(rng, 1 + rng.below(max_i), vocab_size);
    rows.push_back(batching::encode_pair(q, t, limits));
    labels.push_back(static_cast<int>(rng.below(2)));
  }
  return batching::make_batch(rows, labels, limits);
}

inline model::ModelConfig tiny_config(std::size_t vocab_size = 40) {
  model::ModelConfig c;
  c.layers = 2;
  c.hidden = 8;
  c.heads = 2;
  c.head_dim = 4;
  c.ffn = 16;
  c.vocab_size = vocab_size;
  c.max_positions = 64;
  c.dropout = 0.1;
  return c;
}

}  // namespace srel::testing

#endif  // SREL_TESTS_SUPPORT_FIXTURES_H_
