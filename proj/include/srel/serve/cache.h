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

#ifndef SREL_SERVE_CACHE_H_
#define SREL_SERVE_CACHE_H_

#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "srel/text/wordpiece.h"

namespace srel::serve {

// Least-recently-used map. Not synchronized.
template <class Key, class Value, class Hash = std::hash<Key>>
class LruMap {
 public:
  explicit LruMap(std::size_t capacity) : capacity_(capacity) {}

  std::optional<Value> get(const Key& key) {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    order_.splice(order_.begin(), order_, it->second);
    return it->second->second;
  }

  bool contains(const Key& key) const { return index_.count(key) != 0; }

  void put(const Key& key, Value value) {
    if (capacity_ == 0) return;
    if (auto it = index_.find(key); it != index_.end()) {
      it->second->second = std::move(value);
      order_.splice(order_.begin(), order_, it->second);
      return;
    }
    if (order_.size() == capacity_) {
      index_.erase(order_.back().first);
      order_.pop_back();
    }
    order_.emplace_front(key, std::move(value));
    index_[key] = order_.begin();
  }

  std::size_t size() const { return order_.size(); }
  std::size_t capacity() const { return capacity_; }

 private:
  using Entry = std::pair<Key, Value>;
  std::size_t capacity_;
  std::list<Entry> order_;
  std::unordered_map<Key, typename std::list<Entry>::iterator, Hash> index_;
};

struct ScoreKey {
  std::string query;  // normalized
  uint64_t title_hash = 0;
  std::string checkpoint;
  double temperature = 1.0;

  bool operator==(const ScoreKey&) const = default;
};

struct ScoreKeyHash {
  std::size_t operator()(const ScoreKey& key) const;
};

// Builds the key from raw texts; the title is hashed after normalization.
ScoreKey make_score_key(std::string_view query, std::string_view title, std::string_view checkpoint,
                        double temperature);

struct CacheStats {
  uint64_t score_hits = 0;
  uint64_t score_misses = 0;
  uint64_t query_hits = 0;
  uint64_t query_misses = 0;
  std::size_t scores = 0;
  std::size_t queries = 0;

  double hit_rate() const;
};

struct CacheCapacity {
  std::size_t queries = 100000;
  std::size_t scores = 1000000;
};

// Tokenized queries and pair scores. All members lock internally.
class ScoreCache {
 public:
  explicit ScoreCache(CacheCapacity capacity = {});

  std::optional<text::TokenizedText> query_tokens(const std::string& normalized_query);
  void put_query_tokens(const std::string& normalized_query, text::TokenizedText tokens);
  std::optional<double> score(const ScoreKey& key);
  void put_score(const ScoreKey& key, double score);

  CacheStats stats() const;
  CacheCapacity capacity() const { return capacity_; }

 private:
  CacheCapacity capacity_;
  mutable std::mutex mutex_;
  LruMap<std::string, text::TokenizedText> queries_;
  LruMap<ScoreKey, double, ScoreKeyHash> scores_;
  CacheStats stats_;
};

// Shared handle whose cache can be swapped while readers hold the old one.
class CacheSlot {
 public:
  explicit CacheSlot(std::shared_ptr<ScoreCache> cache = nullptr) : cache_(std::move(cache)) {}

  std::shared_ptr<ScoreCache> get() const {
    std::lock_guard lock(mutex_);
    return cache_;
  }
  void replace(std::shared_ptr<ScoreCache> cache) {
    std::lock_guard lock(mutex_);
    cache_.swap(cache);
  }

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<ScoreCache> cache_;
};

}  // namespace srel::serve

#endif  // SREL_SERVE_CACHE_H_
