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

#ifndef SREL_SERVE_SCORER_H_
#define SREL_SERVE_SCORER_H_

#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srel/batching/batch.h"
#include "srel/data/pairs.h"
#include "srel/model/checkpoint.h"
#include "srel/serve/cache.h"
#include "srel/text/wordpiece.h"

namespace srel::serve {

struct ScoreRequest {
  std::string query;
  std::vector<std::string> candidates;
  std::optional<std::size_t> max_keep;
};

struct ScoreResponse {
  std::vector<double> scores;      // request order
  std::vector<bool> cache_hits;    // request order
  std::vector<std::size_t> kept;   // best first
};

struct ScorerOptions {
  batching::SegmentLimits limits;
  std::size_t batch_size = 64;
  double temperature = 1.0;
  bool trim = true;
  std::size_t max_keep = 2000;
};

// Running totals over cold-path batches. Predicted figures come from the
// closed-form estimate at the padded and the scored widths.
struct ScorerStats {
  uint64_t requests = 0;
  uint64_t candidates = 0;
  uint64_t cold_scored = 0;
  uint64_t batches = 0;
  double predicted_mha_padded = 0;
  double predicted_mha_scored = 0;
  uint64_t measured_attention_flops = 0;
  // Same estimates with l counting only query and item tokens.
  double predicted_mha_padded_content = 0;
  double predicted_mha_scored_content = 0;

  // Share of the padded MHA cost saved by trimming, 0 when nothing was scored.
  double flop_savings() const;
};

// Indices of the k highest scores, best first; equal scores keep input order.
std::vector<std::size_t> top_indices(std::span<const double> scores, std::size_t k);

class RelevanceScorer {
 public:
  // Throws ConfigError when the tokenizer's vocabulary is not the one the
  // checkpoint was trained with.
  RelevanceScorer(model::Checkpoint checkpoint, text::Tokenizer tokenizer, ScorerOptions options = {});

  // Scores every candidate; cache may be null. Throws InputError for an empty
  // query or a candidate that is empty after normalization.
  ScoreResponse score(const ScoreRequest& request, ScoreCache* cache) const;

  // Cold path for one query and its titles, bypassing any cache.
  std::vector<double> score_texts(const text::TokenizedText& query, std::span<const text::TokenizedText> titles) const;

  const std::string& checkpoint_id() const { return checkpoint_.id; }
  const model::Checkpoint& checkpoint() const { return checkpoint_; }
  const text::Tokenizer& tokenizer() const { return tokenizer_; }
  const ScorerOptions& options() const { return options_; }
  ScorerStats stats() const;

 private:
  model::Checkpoint checkpoint_;
  text::Tokenizer tokenizer_;
  ScorerOptions options_;
  batching::SpecialIds specials_;
  mutable std::mutex stats_mutex_;
  mutable ScorerStats stats_;
};

struct RefreshConfig {
  // Share of the ranked queries whose tokens are precomputed.
  double query_fraction = 0.2;
  // Most frequent (query, title) pairs to score ahead of time.
  std::size_t pair_budget = 100000;
  CacheCapacity capacity;
};

// Fresh cache holding the tokens of the top queries and the scores of the most
// frequent history pairs (ties in first-seen order). The caller swaps it in.
std::shared_ptr<ScoreCache> refresh_cache(std::span<const data::QueryCount> ranked_queries,
                                          std::span<const data::LabeledPair> history,
                                          const RelevanceScorer& scorer, const RefreshConfig& config);

}  // namespace srel::serve

#endif  // SREL_SERVE_SCORER_H_
