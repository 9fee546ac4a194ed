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

#ifndef SREL_EVAL_REPORT_H_
#define SREL_EVAL_REPORT_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "srel/batching/batch.h"
#include "srel/model/encoder.h"

namespace srel::eval {

struct MetricReport {
  double auc = 0;
  double f1_micro = 0;
  double f1_macro = 0;
  double spearman = 0;
  double pearson = 0;
  double threshold = 0.5;
  std::size_t n = 0;
};

void to_json(nlohmann::json& j, const MetricReport& r);

MetricReport make_report(std::span<const double> scores, std::span<const int> labels, double threshold = 0.5);

// Threshold among the observed scores that maximizes micro F1; lowest wins ties.
double best_threshold(std::span<const double> scores, std::span<const int> labels);

// Aligned columns: name, AUC, F1 micro/macro, Spearman, Pearson.
std::string format_table(const std::vector<std::pair<std::string, MetricReport>>& rows);

struct PredictOptions {
  batching::SegmentLimits limits;
  batching::SpecialIds specials;
  std::size_t batch_size = 64;
  double temperature = 1.0;
  bool trim = true;
};

// p(relevant) for every pair, in input order. Pairs are grouped by length and
// batches are trimmed when options.trim is set.
std::vector<double> predict(const model::EncoderParams& params, std::span<const batching::TokenizedPair> pairs,
                            const PredictOptions& options);

// Throws InputError for an empty dataset; metric errors carry the dataset size.
MetricReport evaluate(const model::EncoderParams& params, std::span<const batching::TokenizedPair> pairs,
                      const PredictOptions& options, double threshold = 0.5);

}  // namespace srel::eval

#endif  // SREL_EVAL_REPORT_H_
