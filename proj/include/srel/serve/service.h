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

#ifndef SREL_SERVE_SERVICE_H_
#define SREL_SERVE_SERVICE_H_

#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"
#include "srel/serve/cache.h"
#include "srel/serve/scorer.h"

namespace srel::serve {

struct ServiceOptions {
  std::size_t max_body_bytes = 16u << 20;
  std::size_t max_candidates = 10000;
  std::size_t latency_window = 10000;  // requests kept for percentiles
  bool use_cache = true;
};

struct LatencySummary {
  std::size_t count = 0;
  double mean = 0, p50 = 0, p90 = 0, p99 = 0, max = 0;
};

// Linear-interpolated percentiles; all zero for no samples.
LatencySummary summarize_latency(std::span<const double> samples_ms);
void to_json(nlohmann::json& j, const LatencySummary& s);

struct HttpReply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Request handlers independent of the transport.
class ScoreService {
 public:
  ScoreService(std::shared_ptr<const RelevanceScorer> scorer, std::shared_ptr<ScoreCache> cache,
               ServiceOptions options = {});

  HttpReply handle_score(std::string_view body);
  HttpReply handle_healthz() const;
  HttpReply handle_stats() const;
  nlohmann::json stats_json() const;

  // Atomic swap; in-flight requests finish on the cache they started with.
  void replace_cache(std::shared_ptr<ScoreCache> cache) { slot_.replace(std::move(cache)); }
  std::shared_ptr<ScoreCache> cache() const { return slot_.get(); }
  const RelevanceScorer& scorer() const { return *scorer_; }
  const ServiceOptions& options() const { return options_; }

 private:
  std::shared_ptr<const RelevanceScorer> scorer_;
  CacheSlot slot_;
  ServiceOptions options_;
  mutable std::mutex mutex_;
  std::deque<double> latencies_ms_;
  uint64_t requests_ = 0;
  uint64_t rejected_ = 0;
  uint64_t last_candidates_ = 0;
  uint64_t last_hits_ = 0;
};

// Parses {"query", "candidates", "max_keep"?}; throws InputError with a message.
ScoreRequest parse_score_request(std::string_view body);
nlohmann::json response_json(const ScoreResponse& response);

// Blocks serving on host:port until the process stops. Returns false when the
// socket cannot be bound.
bool run_http_server(ScoreService& service, const std::string& host, int port);

}  // namespace srel::serve

#endif  // SREL_SERVE_SERVICE_H_
