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

#include "srel/batching/batch.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "srel/common/errors.h"

namespace srel::batching {
namespace {

std::size_t nonzero_length(const std::vector<int32_t>& ids, std::size_t row, std::size_t width) {
  std::size_t len = 0;
  for (std::size_t c = 0; c < width; ++c) {
    if (ids[row * width + c] != 0) len = c + 1;
  }
  return len;
}

void copy_block(const text::TokenizedText& t, std::size_t limit, std::vector<int32_t>& ids,
                std::vector<int32_t>& ner, std::size_t& len) {
  len = std::min(t.size(), limit);
  ids.assign(limit, 0);
  ner.assign(limit, 0);
  for (std::size_t i = 0; i < len; ++i) {
    ids[i] = t.ids[i];
    ner[i] = t.ner[i];
  }
}

}  // namespace

SpecialIds special_ids(const text::Vocabulary& vocab) { return {vocab.cls_id(), vocab.sep_id()}; }

EncodedPair encode_pair(const text::TokenizedText& query, const text::TokenizedText& item, SegmentLimits limits) {
  if (query.empty()) throw InputError("encode_pair: empty query after tokenization");
  if (item.empty()) throw InputError("encode_pair: empty item after tokenization");
  if (limits.query == 0 || limits.item == 0) throw ParameterError("encode_pair: limits must be positive");
  EncodedPair out;
  copy_block(query, limits.query, out.query_ids, out.query_ner, out.query_len);
  copy_block(item, limits.item, out.item_ids, out.item_ner, out.item_len);
  return out;
}

std::size_t PairBatch::query_length(std::size_t row) const { return nonzero_length(query_ids, row, l_q); }
std::size_t PairBatch::item_length(std::size_t row) const { return nonzero_length(item_ids, row, l_i); }

PairBatch make_batch(std::span<const EncodedPair> rows, std::span<const int> labels, SegmentLimits limits,
                     SpecialIds specials) {
  if (!labels.empty() && labels.size() != rows.size()) {
    throw DimensionError("make_batch: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(rows.size()) + " rows");
  }
  PairBatch b;
  b.n = rows.size();
  b.l_q = limits.query;
  b.l_i = limits.item;
  b.specials = specials;
  b.labels.assign(labels.begin(), labels.end());
  for (const EncodedPair& r : rows) {
    if (r.query_ids.size() != limits.query || r.item_ids.size() != limits.item) {
      throw DimensionError("make_batch: row encoded with different limits");
    }
    b.query_ids.insert(b.query_ids.end(), r.query_ids.begin(), r.query_ids.end());
    b.query_ner.insert(b.query_ner.end(), r.query_ner.begin(), r.query_ner.end());
    b.item_ids.insert(b.item_ids.end(), r.item_ids.begin(), r.item_ids.end());
    b.item_ner.insert(b.item_ner.end(), r.item_ner.begin(), r.item_ner.end());
  }
  return b;
}

PairBatch make_batch(std::span<const TokenizedPair> pairs, std::span<const std::size_t> indices, SegmentLimits limits,
                     SpecialIds specials) {
  std::vector<EncodedPair> rows;
  std::vector<int> labels;
  auto add = [&](const TokenizedPair& p) {
    rows.push_back(encode_pair(p.query, p.item, limits));
    labels.push_back(p.label);
  };
  if (indices.empty()) {
    for (const TokenizedPair& p : pairs) add(p);
  } else {
    for (std::size_t i : indices) add(pairs[i]);
  }
  return make_batch(rows, labels, limits, specials);
}

model::InputEncoding to_encoding(const PairBatch& b) {
  const std::size_t l = b.width();
  model::InputEncoding enc(b.n, l);
  for (std::size_t r = 0; r < b.n; ++r) {
    const std::size_t base = r * l;
    int32_t pos = 0;
    auto put = [&](std::size_t col, int32_t token, int32_t segment, int32_t ner) {
      if (token == 0) return;
      enc.tokens[base + col] = token;
      enc.segments[base + col] = segment;
      enc.positions[base + col] = pos++;
      enc.ner[base + col] = ner;
      enc.mask[base + col] = 1;
    };
    put(0, b.specials.cls, 0, 0);
    for (std::size_t c = 0; c < b.l_q; ++c) put(1 + c, b.query_ids[r * b.l_q + c], 0, b.query_ner[r * b.l_q + c]);
    put(1 + b.l_q, b.specials.sep, 0, 0);
    for (std::size_t c = 0; c < b.l_i; ++c) {
      put(2 + b.l_q + c, b.item_ids[r * b.l_i + c], 1, b.item_ner[r * b.l_i + c]);
    }
    put(2 + b.l_q + b.l_i, b.specials.sep, 1, 0);
  }
  return enc;
}

TrimmedBatch trim_batch(const PairBatch& b) {
  std::vector<char> keep_q(b.l_q, 0), keep_i(b.l_i, 0);
  for (std::size_t r = 0; r < b.n; ++r) {
    for (std::size_t c = 0; c < b.l_q; ++c) keep_q[c] |= b.query_ids[r * b.l_q + c] != 0;
    for (std::size_t c = 0; c < b.l_i; ++c) keep_i[c] |= b.item_ids[r * b.l_i + c] != 0;
  }
  std::vector<std::size_t> cols_q, cols_i;
  for (std::size_t c = 0; c < b.l_q; ++c)
    if (keep_q[c]) cols_q.push_back(c);
  for (std::size_t c = 0; c < b.l_i; ++c)
    if (keep_i[c]) cols_i.push_back(c);

  TrimmedBatch t;
  t.padded_width = b.width();
  PairBatch& o = t.batch;
  o.n = b.n;
  o.l_q = cols_q.size();
  o.l_i = cols_i.size();
  o.labels = b.labels;
  o.specials = b.specials;
  for (std::size_t r = 0; r < b.n; ++r) {
    for (std::size_t c : cols_q) {
      o.query_ids.push_back(b.query_ids[r * b.l_q + c]);
      o.query_ner.push_back(b.query_ner[r * b.l_q + c]);
    }
    for (std::size_t c : cols_i) {
      o.item_ids.push_back(b.item_ids[r * b.l_i + c]);
      o.item_ner.push_back(b.item_ner[r * b.l_i + c]);
    }
  }
  t.columns.push_back(0);
  for (std::size_t c : cols_q) t.columns.push_back(1 + c);
  t.columns.push_back(1 + b.l_q);
  for (std::size_t c : cols_i) t.columns.push_back(2 + b.l_q + c);
  t.columns.push_back(2 + b.l_q + b.l_i);
  return t;
}

double cost_ratio(std::size_t l_prime, std::size_t l) {
  if (l == 0 || l_prime == 0 || l_prime > l) {
    throw ContractError("cost_ratio: need 0 < l' <= l, got l'=" + std::to_string(l_prime) +
                        " l=" + std::to_string(l));
  }
  return static_cast<double>(l_prime * l_prime) / static_cast<double>(l * l);
}

BatchFlops measure_batch_flops(const PairBatch& batch, const model::ModelConfig& config) {
  const TrimmedBatch t = trim_batch(batch);
  BatchFlops f;
  f.padded_width = batch.width();
  f.trimmed_width = t.batch.width();
  const model::ComplexityEstimate full = model::complexity_estimate(config, batch.n, f.padded_width);
  const model::ComplexityEstimate cut = model::complexity_estimate(config, batch.n, f.trimmed_width);
  f.padded_mha = full.mha_flops;
  f.trimmed_mha = cut.mha_flops;
  f.padded_ffn = full.ffn_flops;
  f.trimmed_ffn = cut.ffn_flops;
  f.ratio = cost_ratio(f.trimmed_width, f.padded_width);
  return f;
}

std::vector<std::vector<std::size_t>> bucket_by_length(std::span<const std::size_t> lengths, std::size_t batch_size,
                                                       core::Rng* rng) {
  if (batch_size == 0) throw ParameterError("bucket_by_length: batch size must be positive");
  std::vector<std::size_t> order(lengths.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lengths[a] < lengths[b]; });
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t end = std::min(order.size(), start + batch_size);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  if (rng != nullptr) {
    for (std::size_t i = batches.size(); i > 1; --i) std::swap(batches[i - 1], batches[rng->below(i)]);
  }
  return batches;
}

}  // namespace srel::batching
