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

#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "srel/batching/batch.h"
#include "srel/common/errors.h"
#include "srel/core/flops.h"
#include "srel/model/encoder.h"
#include "support/fixtures.h"

namespace srel::batching {
namespace {

using core::Rng;
using testing::random_batch;
using testing::random_tokens;

TEST_CASE("encode_pair pads and truncates") {
  Rng rng(1);
  SegmentLimits limits;
  EncodedPair p = encode_pair(random_tokens(rng, 4, 50), random_tokens(rng, 12, 50), limits);
  CHECK(p.query_ids.size() == 16);
  CHECK(p.item_ids.size() == 36);
  CHECK(std::count(p.query_ids.begin(), p.query_ids.end(), 0) == 12);
  CHECK(std::count(p.item_ids.begin(), p.item_ids.end(), 0) == 24);
  EncodedPair longq = encode_pair(random_tokens(rng, 20, 50), random_tokens(rng, 3, 50), limits);
  CHECK(longq.query_len == 16);
  CHECK(std::count(longq.query_ids.begin(), longq.query_ids.end(), 0) == 0);
  CHECK_THROWS_AS(encode_pair(random_tokens(rng, 2, 50), text::TokenizedText{}, limits), InputError);
  CHECK_THROWS_AS(encode_pair(text::TokenizedText{}, random_tokens(rng, 2, 50), limits), InputError);
}

TEST_CASE("encoding layout") {
  Rng rng(2);
  auto q = random_tokens(rng, 2, 50);
  auto t = random_tokens(rng, 3, 50);
  std::vector<EncodedPair> rows = {encode_pair(q, t, {4, 5})};
  PairBatch b = make_batch(rows, {}, {4, 5});
  model::InputEncoding enc = to_encoding(b);
  CHECK(enc.l == 12);
  CHECK_NOTHROW(enc.validate());
  const std::vector<int32_t> tokens = {2, q.ids[0], q.ids[1], 0, 0, 3, t.ids[0], t.ids[1], t.ids[2], 0, 0, 3};
  CHECK(enc.tokens == tokens);
  const std::vector<int32_t> segments = {0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 1};
  CHECK(enc.segments == segments);
  const std::vector<int32_t> positions = {0, 1, 2, 0, 0, 3, 4, 5, 6, 0, 0, 7};
  CHECK(enc.positions == positions);
  CHECK(enc.ner[1] == q.ner[0]);
  CHECK(enc.ner[0] == 0);
  CHECK(enc.ner[5] == 0);
}

TEST_CASE("trim examples") {
  Rng rng(3);
  SegmentLimits limits;
  SUBCASE("4 of 16 and 12 of 36") {
    std::vector<EncodedPair> rows = {encode_pair(random_tokens(rng, 4, 50), random_tokens(rng, 7, 50), limits),
                                     encode_pair(random_tokens(rng, 2, 50), random_tokens(rng, 12, 50), limits)};
    PairBatch b = make_batch(rows, {}, limits);
    TrimmedBatch t = trim_batch(b);
    CHECK(t.batch.l_q == 4);
    CHECK(t.batch.l_i == 12);
    CHECK(t.batch.width() == 19);
    CHECK(t.padded_width == 55);
    auto flops = measure_batch_flops(b, model::ModelConfig{});
    CHECK(flops.ratio == doctest::Approx(0.1193).epsilon(1e-3));
    CHECK(std::abs(flops.trimmed_mha / flops.padded_mha - flops.ratio) < 1e-14);
  }
  SUBCASE("full-length row blocks trimming") {
    std::vector<EncodedPair> rows = {encode_pair(random_tokens(rng, 16, 50), random_tokens(rng, 36, 50), limits),
                                     encode_pair(random_tokens(rng, 1, 50), random_tokens(rng, 1, 50), limits)};
    PairBatch b = make_batch(rows, {}, limits);
    TrimmedBatch t = trim_batch(b);
    CHECK(t.batch == b);
    CHECK(measure_batch_flops(b, model::ModelConfig{}).ratio == 1.0);
  }
  SUBCASE("single short pair") {
    std::vector<EncodedPair> rows = {encode_pair(random_tokens(rng, 2, 50), random_tokens(rng, 1, 50), limits)};
    TrimmedBatch t = trim_batch(make_batch(rows, {}, limits));
    CHECK(t.batch.l_q == 2);
    CHECK(t.batch.l_i == 1);
  }
}

TEST_CASE("cost ratio") {
  CHECK(cost_ratio(52, 52) == 1.0);
  CHECK(cost_ratio(16, 52) == doctest::Approx(0.0947).epsilon(1e-3));
  CHECK(cost_ratio(26, 52) == 0.25);
  CHECK_THROWS_AS(cost_ratio(53, 52), ContractError);
  CHECK_THROWS_AS(cost_ratio(0, 52), ContractError);
}

TEST_CASE("trim properties") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    PairBatch b = random_batch(rng, 1 + rng.below(6), {8, 12}, 8, 12, 50);
    TrimmedBatch t = trim_batch(b);
    CHECK(trim_batch(t.batch).batch == t.batch);
    CHECK(t.batch.l_q <= b.l_q);
    CHECK(t.batch.l_i <= b.l_i);
    std::size_t max_q = 0, max_i = 0;
    for (std::size_t r = 0; r < b.n; ++r) max_q = std::max(max_q, b.query_length(r)), max_i = std::max(max_i, b.item_length(r));
    CHECK(t.batch.l_q == max_q);
    CHECK(t.batch.l_i == max_i);
    // Column map is injective and keeps every real token in place.
    auto full = to_encoding(b);
    auto cut = to_encoding(t.batch);
    for (std::size_t i = 1; i < t.columns.size(); ++i) CHECK(t.columns[i] > t.columns[i - 1]);
    for (std::size_t r = 0; r < b.n; ++r) {
      std::map<int32_t, int> a, c;
      for (std::size_t col = 0; col < full.l; ++col) ++a[full.tokens[r * full.l + col]];
      for (std::size_t col = 0; col < cut.l; ++col) {
        ++c[cut.tokens[r * cut.l + col]];
        CHECK(cut.tokens[r * cut.l + col] == full.tokens[r * full.l + t.columns[col]]);
        CHECK(cut.positions[r * cut.l + col] == full.positions[r * full.l + t.columns[col]]);
      }
      a.erase(0);
      c.erase(0);
      CHECK(a == c);
    }
    // Adding a longer row never shrinks the trimmed widths.
    PairBatch longer = random_batch(rng, 1, {8, 12}, 8, 12, 50);
    std::vector<EncodedPair> rows;
    for (std::size_t r = 0; r < b.n; ++r) {
      EncodedPair p;
      p.query_ids.assign(b.query_ids.begin() + r * 8, b.query_ids.begin() + (r + 1) * 8);
      p.query_ner.assign(b.query_ner.begin() + r * 8, b.query_ner.begin() + (r + 1) * 8);
      p.item_ids.assign(b.item_ids.begin() + r * 12, b.item_ids.begin() + (r + 1) * 12);
      p.item_ner.assign(b.item_ner.begin() + r * 12, b.item_ner.begin() + (r + 1) * 12);
      rows.push_back(p);
    }
    EncodedPair extra;
    extra.query_ids = longer.query_ids;
    extra.query_ner = longer.query_ner;
    extra.item_ids = longer.item_ids;
    extra.item_ner = longer.item_ner;
    rows.push_back(extra);
    TrimmedBatch grown = trim_batch(make_batch(rows, {}, {8, 12}));
    CHECK(grown.batch.l_q >= t.batch.l_q);
    CHECK(grown.batch.l_i >= t.batch.l_i);
  }
}

TEST_CASE("trimmed and padded logits agree") {
  model::ModelConfig c = testing::tiny_config(50);
  c.hidden = 16;
  c.head_dim = 8;
  model::EncoderParams p = model::init_params(c, 9);
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    PairBatch b = random_batch(rng, 1 + rng.below(6), {16, 36}, 1 + rng.below(16), 1 + rng.below(36), 50);
    core::Tensor full = model::forward(p, to_encoding(b));
    core::Tensor cut = model::forward(p, to_encoding(trim_batch(b).batch));
    double worst = 0;
    for (std::size_t i = 0; i < full.size(); ++i) worst = std::max(worst, std::abs(full[i] - cut[i]));
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("bucketing groups similar lengths") {
  std::vector<std::size_t> lengths = {5, 1, 9, 3, 7, 2, 8, 4, 6, 0};
  auto batches = bucket_by_length(lengths, 3, nullptr);
  REQUIRE(batches.size() == 4);
  CHECK(batches[0] == std::vector<std::size_t>{9, 1, 5});
  CHECK(batches[3] == std::vector<std::size_t>{2});
  Rng rng(1);
  auto shuffled = bucket_by_length(lengths, 3, &rng);
  std::vector<std::size_t> seen;
  for (auto& b : shuffled) seen.insert(seen.end(), b.begin(), b.end());
  std::sort(seen.begin(), seen.end());
  CHECK(seen.size() == 10);
  CHECK(seen.back() == 9);
  CHECK_THROWS_AS(bucket_by_length(lengths, 0, nullptr), ParameterError);
}

}  // namespace
}  // namespace srel::batching
