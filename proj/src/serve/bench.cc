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

#include "srel/serve/bench.h"

#include <chrono>
#include <cstdio>
#include <map>

#include "srel/common/errors.h"
#include "srel/eval/metrics.h"
#include "srel/text/normalize.h"

namespace srel::serve {

namespace {

struct BenchRequest {
  ScoreRequest request;
  std::vector<int> labels;
};

std::vector<BenchRequest> group_requests(std::span<const data::LabeledPair> pairs, std::size_t max_candidates) {
  std::vector<BenchRequest> out;
  std::map<std::string, std::size_t> open;
  for (const auto& p : pairs) {
    const std::string q = text::normalize(p.query);
    auto it = open.find(q);
    if (it == open.end() || out[it->second].request.candidates.size() >= max_candidates) {
      out.push_back({ScoreRequest{q, {}, std::nullopt}, {}});
      it = open.insert_or_assign(q, out.size() - 1).first;
    }
    out[it->second].request.candidates.push_back(p.title);
    out[it->second].labels.push_back(p.label.value_or(0));
  }
  for (auto& r : out) r.request.max_keep = r.request.candidates.size();
  return out;
}

}  // namespace

void to_json(nlohmann::json& j, const BenchRow& r) {
  j = nlohmann::json{{"drs", r.drs},
                     {"cache", r.cache},
                     {"requests", r.requests},
                     {"pairs", r.pairs},
                     {"latency", r.latency},
                     {"total_ms", r.total_ms},
                     {"predicted_mha_ratio", r.predicted_ratio},
                     {"predicted_mha_ratio_content", r.predicted_ratio_content},
                     {"measured_over_predicted", r.measured_over_predicted},
                     {"hit_rate", r.hit_rate},
                     {"auc", r.auc}};
}

std::vector<BenchRow> run_bench(const model::Checkpoint& checkpoint, const text::Tokenizer& tokenizer,
                                std::span<const data::LabeledPair> pairs, const BenchOptions& options) {
  if (pairs.empty()) throw InputError("bench: no pairs");
  const std::vector<BenchRequest> requests = group_requests(pairs, options.max_candidates);
  std::vector<BenchRow> rows;
  for (bool drs : options.drs) {
    for (bool use_cache : options.cache) {
      ScorerOptions so = options.scorer;
      so.trim = drs;
      const RelevanceScorer scorer(checkpoint, tokenizer, so);
      std::unique_ptr<ScoreCache> cache;
      if (use_cache) {
        cache = std::make_unique<ScoreCache>(CacheCapacity{requests.size() + 1, pairs.size() + 1});
        for (const auto& r : requests) scorer.score(r.request, cache.get());
      }
      const CacheStats before = cache ? cache->stats() : CacheStats{};

      BenchRow row;
      row.drs = drs;
      row.cache = use_cache;
      std::vector<double> latencies, scores;
      std::vector<int> labels;
      const auto start = std::chrono::steady_clock::now();
      for (const auto& r : requests) {
        const auto t0 = std::chrono::steady_clock::now();
        const ScoreResponse resp = scorer.score(r.request, cache.get());
        latencies.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
        scores.insert(scores.end(), resp.scores.begin(), resp.scores.end());
        labels.insert(labels.end(), r.labels.begin(), r.labels.end());
      }
      row.total_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      row.requests = requests.size();
      row.pairs = scores.size();
      row.latency = summarize_latency(latencies);

      const ScorerStats st = scorer.stats();
      if (st.predicted_mha_padded > 0) {
        row.predicted_ratio = st.predicted_mha_scored / st.predicted_mha_padded;
        row.predicted_ratio_content = st.predicted_mha_scored_content / st.predicted_mha_padded_content;
        row.measured_over_predicted = static_cast<double>(st.measured_attention_flops) / st.predicted_mha_scored;
      }
      if (cache) {
        const CacheStats after = cache->stats();
        const double hits = static_cast<double>(after.score_hits - before.score_hits);
        const double misses = static_cast<double>(after.score_misses - before.score_misses);
        row.hit_rate = hits + misses > 0 ? hits / (hits + misses) : 0.0;
      }
      bool both = false, has0 = false;
      for (int l : labels) (l ? both : has0) = true;
      row.auc = both && has0 ? eval::auc(scores, labels) : 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_bench(std::span<const BenchRow> rows) {
  std::string out =
      "# GPU utilization is not measurable here; MHA cost comes from instrumented FLOP counters and latency is "
      "CPU wall-clock.\n"
      "# mha_ratio counts l = l_q + l_i + 3 (specials included); mha_ratio_content uses l = l_q + l_i.\n"
      "# cache=on rows time a repeat pass after a warm-up pass.\n";
  char line[512];
  std::snprintf(line, sizeof line, "%-4s %-6s %9s %9s %9s %9s %11s %10s %17s %12s %9s %8s\n", "drs", "cache",
                "requests", "mean_ms", "p50_ms", "p99_ms", "total_ms", "mha_ratio", "mha_ratio_content",
                "measured/pred", "hit_rate", "auc");
  out += line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-4s %-6s %9zu %9.3f %9.3f %9.3f %11.1f %10.4f %17.4f %12.4f %9.4f %8.4f\n",
                  r.drs ? "on" : "off", r.cache ? "on" : "off", r.requests, r.latency.mean, r.latency.p50,
                  r.latency.p99, r.total_ms, r.predicted_ratio, r.predicted_ratio_content, r.measured_over_predicted,
                  r.hit_rate, r.auc);
    out += line;
  }
  return out;
}

}  // namespace srel::serve
