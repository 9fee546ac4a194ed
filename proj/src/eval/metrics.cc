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

#include "srel/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "srel/common/errors.h"

namespace srel::eval {
namespace {

void require_same_length(std::size_t a, std::size_t b, const char* metric) {
  if (a != b) {
    throw DimensionError(std::string(metric) + ": " + std::to_string(a) + " scores vs " + std::to_string(b) +
                         " labels");
  }
}

std::vector<double> as_doubles(std::span<const int> labels) { return {labels.begin(), labels.end()}; }

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  require_same_length(scores.size(), labels.size(), "auc");
  double positives = 0, negatives = 0, rank_sum = 0;
  const std::vector<double> ranks = average_ranks(scores);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) {
      positives += 1;
      rank_sum += ranks[i];
    } else {
      negatives += 1;
    }
  }
  if (positives == 0 || negatives == 0) throw UndefinedMetricError("auc: labels contain a single class");
  return (rank_sum - positives * (positives + 1) / 2) / (positives * negatives);
}

F1Scores f1(std::span<const double> scores, std::span<const int> labels, double threshold) {
  require_same_length(scores.size(), labels.size(), "f1");
  double tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    const bool actual = labels[i] == 1;
    if (predicted && actual) tp += 1;
    if (predicted && !actual) fp += 1;
    if (!predicted && actual) fn += 1;
    if (!predicted && !actual) tn += 1;
  }
  auto class_f1 = [](double t, double false_pos, double false_neg) {
    const double denom = 2 * t + false_pos + false_neg;
    return denom == 0 ? 0.0 : 2 * t / denom;
  };
  F1Scores out;
  out.positive = class_f1(tp, fp, fn);
  out.negative = class_f1(tn, fn, fp);
  out.macro = 0.5 * (out.positive + out.negative);
  // Pooled over both classes every error is one false positive and one false negative.
  const double n = tp + fp + fn + tn;
  out.micro = n == 0 ? 0.0 : (tp + tn) / n;
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size(), "pearson");
  if (x.size() < 2) throw UndefinedMetricError("pearson: need at least two examples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) throw UndefinedMetricError("correlation: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size(), "spearman");
  const std::vector<double> rx = average_ranks(x), ry = average_ranks(y);
  return pearson(rx, ry);
}

double pearson(std::span<const double> scores, std::span<const int> labels) {
  return pearson(scores, as_doubles(labels));
}

double spearman(std::span<const double> scores, std::span<const int> labels) {
  return spearman(scores, as_doubles(labels));
}

}  // namespace srel::eval
