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

#include "srel/serve/service.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <vector>

#include "httplib.h"
#include "srel/common/errors.h"
#include "srel/common/log.h"

namespace srel::serve {

using nlohmann::json;

LatencySummary summarize_latency(std::span<const double> samples_ms) {
  LatencySummary s;
  s.count = samples_ms.size();
  if (samples_ms.empty()) return s;
  std::vector<double> v(samples_ms.begin(), samples_ms.end());
  std::sort(v.begin(), v.end());
  auto at = [&](double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  s.p50 = at(0.5);
  s.p90 = at(0.9);
  s.p99 = at(0.99);
  s.max = v.back();
  return s;
}

void to_json(json& j, const LatencySummary& s) {
  j = json{{"count", s.count}, {"mean_ms", s.mean}, {"p50_ms", s.p50},
           {"p90_ms", s.p90},  {"p99_ms", s.p99},   {"max_ms", s.max}};
}

ScoreRequest parse_score_request(std::string_view body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw InputError("request body is not valid JSON");
  if (!j.is_object()) throw InputError("request body must be a JSON object");
  ScoreRequest req;
  if (!j.contains("query") || !j["query"].is_string()) throw InputError("\"query\" must be a string");
  req.query = j["query"].get<std::string>();
  if (!j.contains("candidates") || !j["candidates"].is_array()) throw InputError("\"candidates\" must be an array");
  for (const auto& c : j["candidates"]) {
    if (!c.is_string()) throw InputError("\"candidates\" must contain only strings");
    req.candidates.push_back(c.get<std::string>());
  }
  if (j.contains("max_keep") && !j["max_keep"].is_null()) {
    if (!j["max_keep"].is_number_unsigned()) throw InputError("\"max_keep\" must be a non-negative integer");
    req.max_keep = j["max_keep"].get<std::size_t>();
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "query" && key != "candidates" && key != "max_keep") throw InputError("unknown field \"" + key + "\"");
  }
  return req;
}

json response_json(const ScoreResponse& response) {
  json hits = json::array();
  for (bool h : response.cache_hits) hits.push_back(h);
  return json{{"scores", response.scores}, {"cache_hits", hits}, {"kept", response.kept}};
}

namespace {

HttpReply error_reply(int status, const std::string& message) {
  return {status, json{{"error", message}}.dump()};
}

}  // namespace

ScoreService::ScoreService(std::shared_ptr<const RelevanceScorer> scorer, std::shared_ptr<ScoreCache> cache,
                           ServiceOptions options)
    : scorer_(std::move(scorer)), slot_(std::move(cache)), options_(options) {
  if (!scorer_) throw ConfigError("service: scorer is null");
}

HttpReply ScoreService::handle_score(std::string_view body) {
  const auto start = std::chrono::steady_clock::now();
  auto reject = [&](int status, const std::string& message) {
    std::lock_guard lock(mutex_);
    ++rejected_;
    return error_reply(status, message);
  };
  if (body.size() > options_.max_body_bytes) {
    return reject(413, "payload of " + std::to_string(body.size()) + " bytes exceeds " +
                           std::to_string(options_.max_body_bytes));
  }
  ScoreRequest request;
  try {
    request = parse_score_request(body);
  } catch (const InputError& e) {
    return reject(400, e.what());
  }
  if (request.candidates.size() > options_.max_candidates) {
    return reject(413, std::to_string(request.candidates.size()) + " candidates exceed the limit of " +
                           std::to_string(options_.max_candidates));
  }
  ScoreResponse response;
  try {
    std::shared_ptr<ScoreCache> cache = options_.use_cache ? slot_.get() : nullptr;
    response = scorer_->score(request, cache.get());
  } catch (const InputError& e) {
    return reject(400, e.what());
  }
  HttpReply reply{200, response_json(response).dump()};
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  std::lock_guard lock(mutex_);
  ++requests_;
  latencies_ms_.push_back(ms);
  while (latencies_ms_.size() > options_.latency_window) latencies_ms_.pop_front();
  last_candidates_ = response.cache_hits.size();
  last_hits_ = static_cast<uint64_t>(std::count(response.cache_hits.begin(), response.cache_hits.end(), true));
  return reply;
}

HttpReply ScoreService::handle_healthz() const { return {200, "ok", "text/plain"}; }

json ScoreService::stats_json() const {
  const ScorerStats scorer_stats = scorer_->stats();
  const std::shared_ptr<ScoreCache> cache = slot_.get();
  json j;
  {
    std::lock_guard lock(mutex_);
    const std::vector<double> samples(latencies_ms_.begin(), latencies_ms_.end());
    j["requests"] = requests_;
    j["rejected"] = rejected_;
    j["latency"] = summarize_latency(samples);
    j["last_request"] = {{"candidates", last_candidates_},
                         {"cache_hits", last_hits_},
                         {"hit_rate", last_candidates_ ? static_cast<double>(last_hits_) / last_candidates_ : 0.0}};
  }
  if (cache) {
    const CacheStats c = cache->stats();
    j["cache"] = {{"enabled", options_.use_cache},
                  {"hit_rate", c.hit_rate()},
                  {"score_hits", c.score_hits},
                  {"score_misses", c.score_misses},
                  {"query_hits", c.query_hits},
                  {"query_misses", c.query_misses},
                  {"scores", c.scores},
                  {"queries", c.queries}};
  } else {
    j["cache"] = {{"enabled", false}};
  }
  j["scorer"] = {{"checkpoint", scorer_->checkpoint_id()},
                 {"candidates", scorer_stats.candidates},
                 {"cold_scored", scorer_stats.cold_scored},
                 {"batches", scorer_stats.batches},
                 {"predicted_mha_padded", scorer_stats.predicted_mha_padded},
                 {"predicted_mha_scored", scorer_stats.predicted_mha_scored},
                 {"measured_attention_flops", scorer_stats.measured_attention_flops},
                 {"flop_savings", scorer_stats.flop_savings()}};
  return j;
}

HttpReply ScoreService::handle_stats() const { return {200, stats_json().dump()}; }

bool run_http_server(ScoreService& service, const std::string& host, int port) {
  httplib::Server server;
  server.set_payload_max_length(service.options().max_body_bytes);
  auto send = [](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
  };
  server.set_error_handler([&](const httplib::Request&, httplib::Response& res) {
    if (res.status == 413) send(res, error_reply(413, "payload exceeds " + std::to_string(service.options().max_body_bytes) + " bytes"));
  });
  server.Post("/score", [&](const httplib::Request& req, httplib::Response& res) {
    send(res, service.handle_score(req.body));
  });
  server.Get("/healthz", [&](const httplib::Request&, httplib::Response& res) { send(res, service.handle_healthz()); });
  server.Get("/stats", [&](const httplib::Request&, httplib::Response& res) { send(res, service.handle_stats()); });
  SREL_LOG_INFO << "serving on " << host << ":" << port;
  return server.listen(host, port);
}

}  // namespace srel::serve
