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

#include "srel/eval/report.h"

#include <algorithm>
#include <cstdio>

#include "srel/common/errors.h"
#include "srel/eval/metrics.h"

namespace srel::eval {

void to_json(nlohmann::json& j, const MetricReport& r) {
  j = nlohmann::json{{"auc", r.auc},           {"f1_micro", r.f1_micro}, {"f1_macro", r.f1_macro},
                     {"spearman", r.spearman}, {"pearson", r.pearson},   {"threshold", r.threshold},
                     {"n", r.n}};
}

MetricReport make_report(std::span<const double> scores, std::span<const int> labels, double threshold) {
  MetricReport r;
  r.n = scores.size();
  r.threshold = threshold;
  r.auc = auc(scores, labels);
  const F1Scores f = f1(scores, labels, threshold);
  r.f1_micro = f.micro;
  r.f1_macro = f.macro;
  r.spearman = spearman(scores, labels);
  r.pearson = pearson(scores, labels);
  return r;
}

double best_threshold(std::span<const double> scores, std::span<const int> labels) {
  std::vector<double> candidates(scores.begin(), scores.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  double best = 0.5, best_f1 = -1;
  for (double t : candidates) {
    const double m = f1(scores, labels, t).micro;
    if (m > best_f1) best = t, best_f1 = m;
  }
  return best;
}

std::string format_table(const std::vector<std::pair<std::string, MetricReport>>& rows) {
  std::size_t width = 5;
  for (const auto& [name, r] : rows) width = std::max(width, name.size());
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-*s  %8s  %8s  %8s  %9s  %8s  %7s\n", static_cast<int>(width), "model", "AUC",
                "F1-micro", "F1-macro", "Spearman", "Pearson", "n");
  out += line;
  for (const auto& [name, r] : rows) {
    std::snprintf(line, sizeof(line), "%-*s  %8.4f  %8.4f  %8.4f  %9.4f  %8.4f  %7zu\n", static_cast<int>(width),
                  name.c_str(), r.auc, r.f1_micro, r.f1_macro, r.spearman, r.pearson, r.n);
    out += line;
  }
  return out;
}

std::vector<double> predict(const model::EncoderParams& params, std::span<const batching::TokenizedPair> pairs,
                            const PredictOptions& options) {
  std::vector<std::size_t> lengths(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    lengths[i] = std::min(pairs[i].query.size(), options.limits.query) * 64 +
                 std::min(pairs[i].item.size(), options.limits.item);
  }
  std::vector<double> scores(pairs.size());
  for (const auto& group : batching::bucket_by_length(lengths, std::max<std::size_t>(1, options.batch_size), nullptr)) {
    batching::PairBatch batch = batching::make_batch(pairs, group, options.limits, options.specials);
    if (options.trim) batch = batching::trim_batch(batch).batch;
    const std::vector<double> s =
        model::relevance_score(model::forward(params, batching::to_encoding(batch)), options.temperature);
    for (std::size_t k = 0; k < group.size(); ++k) scores[group[k]] = s[k];
  }
  return scores;
}

MetricReport evaluate(const model::EncoderParams& params, std::span<const batching::TokenizedPair> pairs,
                      const PredictOptions& options, double threshold) {
  if (pairs.empty()) throw InputError("evaluate: empty dataset");
  const std::vector<double> scores = predict(params, pairs, options);
  std::vector<int> labels;
  labels.reserve(pairs.size());
  for (const auto& p : pairs) labels.push_back(p.label);
  try {
    return make_report(scores, labels, threshold);
  } catch (const UndefinedMetricError& e) {
    throw UndefinedMetricError("evaluate on " + std::to_string(pairs.size()) + " pairs: " + e.what());
  }
}

}  // namespace srel::eval
