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

#include "srel/serve/scorer.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "srel/common/errors.h"
#include "srel/common/hash.h"
#include "srel/core/flops.h"
#include "srel/model/config.h"
#include "srel/text/normalize.h"

namespace srel::serve {

double ScorerStats::flop_savings() const {
  return predicted_mha_padded > 0 ? 1.0 - predicted_mha_scored / predicted_mha_padded : 0.0;
}

std::vector<std::size_t> top_indices(std::span<const double> scores, std::size_t k) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(std::min(k, order.size()));
  return order;
}

RelevanceScorer::RelevanceScorer(model::Checkpoint checkpoint, text::Tokenizer tokenizer, ScorerOptions options)
    : checkpoint_(std::move(checkpoint)), tokenizer_(std::move(tokenizer)), options_(options) {
  const auto& vocab = tokenizer_.vocab();
  if (checkpoint_.vocab_fingerprint != vocab.fingerprint()) {
    throw ConfigError("scorer: checkpoint " + checkpoint_.id + " was trained with vocabulary " +
                      hex64(checkpoint_.vocab_fingerprint) + ", tokenizer has " + hex64(vocab.fingerprint()));
  }
  if (checkpoint_.params.config.vocab_size != vocab.size()) {
    throw ConfigError("scorer: checkpoint vocabulary size " + std::to_string(checkpoint_.params.config.vocab_size) +
                      " differs from tokenizer vocabulary size " + std::to_string(vocab.size()));
  }
  checkpoint_.params.config.require_layout(options_.limits.query, options_.limits.item);
  if (options_.batch_size == 0) throw ConfigError("scorer: batch size must be positive");
  if (!(options_.temperature > 0)) throw ConfigError("scorer: temperature must be positive");
  specials_ = batching::special_ids(vocab);
}

std::vector<double> RelevanceScorer::score_texts(const text::TokenizedText& query,
                                                 std::span<const text::TokenizedText> titles) const {
  std::vector<double> scores(titles.size());
  if (titles.empty()) return scores;
  std::vector<std::size_t> lengths(titles.size());
  for (std::size_t i = 0; i < titles.size(); ++i) lengths[i] = std::min(titles[i].size(), options_.limits.item);

  ScorerStats local;
  const model::ModelConfig& config = checkpoint_.params.config;
  for (const auto& group : batching::bucket_by_length(lengths, options_.batch_size, nullptr)) {
    std::vector<batching::EncodedPair> rows;
    rows.reserve(group.size());
    for (std::size_t i : group) rows.push_back(batching::encode_pair(query, titles[i], options_.limits));
    batching::PairBatch batch = batching::make_batch(rows, {}, options_.limits, specials_);
    const std::size_t padded = batch.width();
    if (options_.trim) batch = batching::trim_batch(batch).batch;

    const uint64_t before = core::flop_counter().attention;
    const core::Tensor logits = model::forward(checkpoint_.params, batching::to_encoding(batch));
    local.measured_attention_flops += core::flop_counter().attention - before;
    local.predicted_mha_padded += model::complexity_estimate(config, batch.n, padded).mha_flops;
    local.predicted_mha_scored += model::complexity_estimate(config, batch.n, batch.width()).mha_flops;
    local.predicted_mha_padded_content += model::complexity_estimate(config, batch.n, padded - 3).mha_flops;
    local.predicted_mha_scored_content += model::complexity_estimate(config, batch.n, batch.width() - 3).mha_flops;
    ++local.batches;

    const std::vector<double> s = model::relevance_score(logits, options_.temperature);
    for (std::size_t k = 0; k < group.size(); ++k) scores[group[k]] = s[k];
  }
  std::lock_guard lock(stats_mutex_);
  stats_.batches += local.batches;
  stats_.cold_scored += titles.size();
  stats_.predicted_mha_padded += local.predicted_mha_padded;
  stats_.predicted_mha_scored += local.predicted_mha_scored;
  stats_.measured_attention_flops += local.measured_attention_flops;
  stats_.predicted_mha_padded_content += local.predicted_mha_padded_content;
  stats_.predicted_mha_scored_content += local.predicted_mha_scored_content;
  return scores;
}

ScoreResponse RelevanceScorer::score(const ScoreRequest& request, ScoreCache* cache) const {
  const std::string query = text::normalize(request.query);
  if (query.empty()) throw InputError("score: query is empty");

  std::optional<text::TokenizedText> query_tokens;
  if (cache != nullptr) query_tokens = cache->query_tokens(query);
  if (!query_tokens) {
    query_tokens = tokenizer_(query);
    if (cache != nullptr) cache->put_query_tokens(query, *query_tokens);
  }

  const std::size_t n = request.candidates.size();
  ScoreResponse response;
  response.scores.assign(n, 0.0);
  response.cache_hits.assign(n, false);
  std::vector<std::size_t> cold;
  std::vector<ScoreKey> keys;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string title = text::normalize(request.candidates[i]);
    if (title.empty()) throw InputError("score: candidate " + std::to_string(i) + " is empty");
    if (cache == nullptr) {
      cold.push_back(i);
      continue;
    }
    ScoreKey key{query, fnv1a(title), checkpoint_.id, options_.temperature};
    if (auto hit = cache->score(key)) {
      response.scores[i] = *hit;
      response.cache_hits[i] = true;
    } else {
      cold.push_back(i);
      keys.push_back(std::move(key));
    }
  }

  if (!cold.empty()) {
    std::vector<text::TokenizedText> titles;
    titles.reserve(cold.size());
    for (std::size_t i : cold) titles.push_back(tokenizer_(request.candidates[i]));
    const std::vector<double> scores = score_texts(*query_tokens, titles);
    for (std::size_t k = 0; k < cold.size(); ++k) {
      response.scores[cold[k]] = scores[k];
      if (cache != nullptr) cache->put_score(keys[k], scores[k]);
    }
  }
  response.kept = top_indices(response.scores, request.max_keep.value_or(options_.max_keep));

  std::lock_guard lock(stats_mutex_);
  ++stats_.requests;
  stats_.candidates += n;
  return response;
}

ScorerStats RelevanceScorer::stats() const {
  std::lock_guard lock(stats_mutex_);
  return stats_;
}

std::shared_ptr<ScoreCache> refresh_cache(std::span<const data::QueryCount> ranked_queries,
                                          std::span<const data::LabeledPair> history,
                                          const RelevanceScorer& scorer, const RefreshConfig& config) {
  auto cache = std::make_shared<ScoreCache>(config.capacity);
  const text::Tokenizer& tokenizer = scorer.tokenizer();
  for (const auto& [query, count] : data::top_fraction(ranked_queries, config.query_fraction)) {
    const std::string normalized = text::normalize(query);
    if (!normalized.empty()) cache->put_query_tokens(normalized, tokenizer(normalized));
  }

  // (query, title) -> (count, first position).
  std::map<std::pair<std::string, std::string>, std::pair<uint64_t, std::size_t>> counts;
  for (std::size_t i = 0; i < history.size(); ++i) {
    std::string q = text::normalize(history[i].query);
    std::string t = text::normalize(history[i].title);
    if (q.empty() || t.empty()) continue;
    auto [it, fresh] = counts.try_emplace({std::move(q), std::move(t)}, 0, i);
    ++it->second.first;
  }
  using Item = std::pair<const std::pair<std::string, std::string>*, std::pair<uint64_t, std::size_t>>;
  std::vector<Item> ranked;
  ranked.reserve(counts.size());
  for (const auto& [key, value] : counts) ranked.emplace_back(&key, value);
  std::sort(ranked.begin(), ranked.end(), [](const Item& a, const Item& b) {
    if (a.second.first != b.second.first) return a.second.first > b.second.first;
    return a.second.second < b.second.second;
  });
  if (ranked.size() > config.pair_budget) ranked.resize(config.pair_budget);

  std::map<std::string, std::vector<std::string>> by_query;
  for (const auto& item : ranked) by_query[item.first->first].push_back(item.first->second);
  for (const auto& [query, titles] : by_query) {
    const text::TokenizedText q = tokenizer(query);
    std::vector<text::TokenizedText> tokenized;
    tokenized.reserve(titles.size());
    for (const auto& t : titles) tokenized.push_back(tokenizer(t));
    const std::vector<double> scores = scorer.score_texts(q, tokenized);
    for (std::size_t k = 0; k < titles.size(); ++k) {
      cache->put_score({query, fnv1a(titles[k]), scorer.checkpoint_id(), scorer.options().temperature}, scores[k]);
    }
  }
  return cache;
}

}  // namespace srel::serve
