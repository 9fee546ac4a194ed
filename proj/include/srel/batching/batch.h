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

#ifndef SREL_BATCHING_BATCH_H_
#define SREL_BATCHING_BATCH_H_

#include <cstdint>
#include <span>
#include <vector>

#include "srel/core/rng.h"
#include "srel/model/config.h"
#include "srel/model/encoder.h"
#include "srel/text/vocabulary.h"
#include "srel/text/wordpiece.h"

namespace srel::batching {

struct SegmentLimits {
  std::size_t query = 16;
  std::size_t item = 36;
  // Full sequence width: both blocks plus [CLS] and two [SEP].
  std::size_t width() const { return query + item + 3; }
};

struct SpecialIds {
  int32_t cls = 2;
  int32_t sep = 3;
  bool operator==(const SpecialIds&) const = default;
};

SpecialIds special_ids(const text::Vocabulary& vocab);

// A tokenized (query, item) pair with its relevance label.
struct TokenizedPair {
  text::TokenizedText query;
  text::TokenizedText item;
  int label = 0;
};

// One pair with each block truncated to its limit and padded with id 0.
struct EncodedPair {
  std::vector<int32_t> query_ids, query_ner;
  std::vector<int32_t> item_ids, item_ner;
  std::size_t query_len = 0;
  std::size_t item_len = 0;
};

// Throws InputError for an empty query or item.
EncodedPair encode_pair(const text::TokenizedText& query, const text::TokenizedText& item, SegmentLimits limits);

// Block layout of n pairs. Row r of the query block is query_ids[r*l_q .. (r+1)*l_q).
struct PairBatch {
  std::size_t n = 0;
  std::size_t l_q = 0;
  std::size_t l_i = 0;
  std::vector<int32_t> query_ids, query_ner;
  std::vector<int32_t> item_ids, item_ner;
  std::vector<int> labels;  // empty when unlabeled
  SpecialIds specials;

  std::size_t width() const { return l_q + l_i + 3; }
  std::size_t query_length(std::size_t row) const;
  std::size_t item_length(std::size_t row) const;
  bool operator==(const PairBatch&) const = default;
};

// Rows must all have been encoded with `limits`. labels may be empty.
PairBatch make_batch(std::span<const EncodedPair> rows, std::span<const int> labels, SegmentLimits limits,
                     SpecialIds specials = {});

// [CLS] query-block [SEP] item-block [SEP]. Segment 0 covers [CLS], the query
// and the first [SEP]. Positions count real tokens only, so a row gets the same
// positions in any block width. Pad cells are all-zero with mask 0.
model::InputEncoding to_encoding(const PairBatch& batch);

// Encodes the selected pairs (all when `indices` is empty) into one batch.
PairBatch make_batch(std::span<const TokenizedPair> pairs, std::span<const std::size_t> indices, SegmentLimits limits,
                     SpecialIds specials);

struct TrimmedBatch {
  PairBatch batch;                  // l_q', l_i' are the batch maxima
  std::vector<std::size_t> columns;  // trimmed column -> padded column
  std::size_t padded_width = 0;
};

// Drops query and item columns that are [PAD] in every row; specials stay.
TrimmedBatch trim_batch(const PairBatch& batch);

// (l'/l)^2. Throws ContractError unless 0 < l' <= l.
double cost_ratio(std::size_t l_prime, std::size_t l);

struct BatchFlops {
  std::size_t padded_width = 0;
  std::size_t trimmed_width = 0;
  double padded_mha = 0;
  double trimmed_mha = 0;
  double padded_ffn = 0;
  double trimmed_ffn = 0;
  double ratio = 1.0;  // cost_ratio(trimmed_width, padded_width)
};

BatchFlops measure_batch_flops(const PairBatch& batch, const model::ModelConfig& config);

// Groups indices into batches of similar length (stable sort by length, then
// chunk). The batch order is shuffled when rng is given.
std::vector<std::vector<std::size_t>> bucket_by_length(std::span<const std::size_t> lengths, std::size_t batch_size,
                                                       core::Rng* rng);

}  // namespace srel::batching

#endif  // SREL_BATCHING_BATCH_H_
