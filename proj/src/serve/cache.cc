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

#include "srel/serve/cache.h"

#include <bit>

#include "srel/common/hash.h"
#include "srel/text/normalize.h"

namespace srel::serve {

std::size_t ScoreKeyHash::operator()(const ScoreKey& key) const {
  uint64_t h = fnv1a(key.query);
  h = fnv1a(key.checkpoint, h ^ key.title_hash);
  return static_cast<std::size_t>(mix_seed(h, std::bit_cast<uint64_t>(key.temperature)));
}

ScoreKey make_score_key(std::string_view query, std::string_view title, std::string_view checkpoint,
                        double temperature) {
  return {text::normalize(query), fnv1a(text::normalize(title)), std::string(checkpoint), temperature};
}

double CacheStats::hit_rate() const {
  const uint64_t total = score_hits + score_misses;
  return total == 0 ? 0.0 : static_cast<double>(score_hits) / static_cast<double>(total);
}

ScoreCache::ScoreCache(CacheCapacity capacity)
    : capacity_(capacity), queries_(capacity.queries), scores_(capacity.scores) {}

std::optional<text::TokenizedText> ScoreCache::query_tokens(const std::string& normalized_query) {
  std::lock_guard lock(mutex_);
  auto hit = queries_.get(normalized_query);
  ++(hit ? stats_.query_hits : stats_.query_misses);
  return hit;
}

void ScoreCache::put_query_tokens(const std::string& normalized_query, text::TokenizedText tokens) {
  std::lock_guard lock(mutex_);
  queries_.put(normalized_query, std::move(tokens));
}

std::optional<double> ScoreCache::score(const ScoreKey& key) {
  std::lock_guard lock(mutex_);
  auto hit = scores_.get(key);
  ++(hit ? stats_.score_hits : stats_.score_misses);
  return hit;
}

void ScoreCache::put_score(const ScoreKey& key, double score) {
  std::lock_guard lock(mutex_);
  scores_.put(key, score);
}

CacheStats ScoreCache::stats() const {
  std::lock_guard lock(mutex_);
  CacheStats s = stats_;
  s.scores = scores_.size();
  s.queries = queries_.size();
  return s;
}

}  // namespace srel::serve
