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

#ifndef SREL_SERVE_BENCH_H_
#define SREL_SERVE_BENCH_H_

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "srel/data/pairs.h"
#include "srel/serve/scorer.h"
#include "srel/serve/service.h"

namespace srel::serve {

struct BenchOptions {
  ScorerOptions scorer;       // trim is overridden per row
  std::vector<bool> drs = {false, true};
  std::vector<bool> cache = {false, true};
  std::size_t max_candidates = 5000;  // per request
};

struct BenchRow {
  bool drs = false;
  bool cache = false;
  std::size_t requests = 0;
  std::size_t pairs = 0;
  LatencySummary latency;     // per request, timed pass
  double total_ms = 0;        // timed pass
  double predicted_ratio = 1;          // scored / padded MHA, l with specials
  double predicted_ratio_content = 1;  // same with l = l_q + l_i
  double measured_over_predicted = 0;  // attention counter / estimate at scored width
  double hit_rate = 0;
  double auc = 0;
};

void to_json(nlohmann::json& j, const BenchRow& r);

// Groups pairs into one request per query (first-seen order). Rows with the
// cache on run a warm-up pass first and time the repeat.
std::vector<BenchRow> run_bench(const model::Checkpoint& checkpoint, const text::Tokenizer& tokenizer,
                                std::span<const data::LabeledPair> pairs, const BenchOptions& options);

std::string format_bench(std::span<const BenchRow> rows);

}  // namespace srel::serve

#endif  // SREL_SERVE_BENCH_H_
