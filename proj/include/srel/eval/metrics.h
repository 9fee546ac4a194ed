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

#ifndef SREL_EVAL_METRICS_H_
#define SREL_EVAL_METRICS_H_

#include <span>
#include <vector>

namespace srel::eval {

// Rank-sum ROC-AUC; tied scores count one half. Throws UndefinedMetricError
// unless both classes are present.
double auc(std::span<const double> scores, std::span<const int> labels);

struct F1Scores {
  double micro = 0;
  double macro = 0;
  double positive = 0;  // F1 of class 1
  double negative = 0;  // F1 of class 0
};

// Predicts 1 where score >= threshold. A class with no predicted and no true
// members, or zero precision and recall, contributes F1 = 0.
F1Scores f1(std::span<const double> scores, std::span<const int> labels, double threshold);

// 1-based ranks, ties share their average rank.
std::vector<double> average_ranks(std::span<const double> values);

// Throw UndefinedMetricError for n < 2 or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);
double pearson(std::span<const double> scores, std::span<const int> labels);
double spearman(std::span<const double> scores, std::span<const int> labels);

}  // namespace srel::eval

#endif  // SREL_EVAL_METRICS_H_
