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

#include "srel/train/losses.h"

#include <cmath>
#include <string>

#include "srel/common/errors.h"
#include "srel/core/functional.h"
#include "srel/core/ops.h"

namespace srel::train {

namespace ops = core::ops;

void to_json(nlohmann::json& j, const LossBreakdown& b) {
  j = nlohmann::json{{"l_bce", b.l_bce}, {"l_ate", b.l_ate}, {"l_adv", b.l_adv}, {"total", b.total}};
}

double bce_loss(std::span<const double> probs, std::span<const int> labels) {
  if (probs.size() != labels.size()) {
    throw DimensionError("bce_loss: " + std::to_string(probs.size()) + " probabilities vs " +
                         std::to_string(labels.size()) + " labels");
  }
  if (probs.empty()) return 0.0;
  double total = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = labels[i] == 1 ? probs[i] : 1.0 - probs[i];
    total += std::log(std::max(p, kProbabilityFloor));
  }
  return -total / static_cast<double>(probs.size());
}

double bce_loss(const core::Tensor& probs, std::span<const int> labels) {
  if (probs.rank() != 2 || probs.cols() != 2 || probs.rows() != labels.size()) {
    throw DimensionError("bce_loss: expected [" + std::to_string(labels.size()) + " x 2] probabilities, got " +
                         core::shape_string(probs.shape()));
  }
  if (labels.empty()) return 0.0;
  double total = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    total += std::log(std::max(probs.at(i, static_cast<std::size_t>(labels[i])), kProbabilityFloor));
  }
  return -total / static_cast<double>(labels.size());
}

core::Tensor adversarial_perturbation(const core::Tensor& grad, std::size_t pairs, double epsilon) {
  if (epsilon < 0) throw ParameterError("adversarial_perturbation: epsilon must be non-negative");
  if (pairs == 0 || grad.size() % pairs != 0) {
    throw DimensionError("adversarial_perturbation: " + core::shape_string(grad.shape()) + " does not split into " +
                         std::to_string(pairs) + " pairs");
  }
  core::Tensor r = core::Tensor::zeros_like(grad);
  const std::size_t slice = grad.size() / pairs;
  for (std::size_t p = 0; p < pairs; ++p) {
    const double* g = grad.data() + p * slice;
    double sq = 0;
    for (std::size_t i = 0; i < slice; ++i) sq += g[i] * g[i];
    if (sq == 0 || epsilon == 0) continue;
    const double factor = -epsilon / std::sqrt(sq);
    double* out = r.data() + p * slice;
    for (std::size_t i = 0; i < slice; ++i) out[i] = factor * g[i];
  }
  return r;
}

double adv_kl_loss(const core::Tensor& p, const core::Tensor& q) {
  core::require_same_shape(p, q, "adv_kl_loss");
  if (p.rank() != 2 || p.rows() == 0) throw DimensionError("adv_kl_loss: expected a non-empty [n x c] tensor");
  for (const core::Tensor* t : {&p, &q}) {
    for (std::size_t i = 0; i < t->rows(); ++i) {
      double s = 0;
      for (double v : t->row(i)) s += v;
      if (std::abs(s - 1.0) > 1e-6) {
        throw ContractError("adv_kl_loss: row " + std::to_string(i) + " sums to " + std::to_string(s));
      }
    }
  }
  double total = 0;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    total += core::kl_divergence(p.row(i), q.row(i), kProbabilityFloor) +
             core::kl_divergence(q.row(i), p.row(i), kProbabilityFloor);
  }
  return total / (2.0 * static_cast<double>(p.rows()));
}

LossBreakdown total_loss(double l_bce, double l_ate, double l_adv, const LossWeights& w) {
  LossBreakdown b;
  b.l_bce = l_bce;
  b.l_ate = l_ate;
  b.l_adv = l_adv;
  b.total = (w.bce * l_bce + w.ate * l_ate) + w.adv * l_adv;
  return b;
}

core::Var log_likelihood(const core::Var& probs, std::span<const int> labels) {
  return ops::sum(ops::log_floor(ops::pick(probs, labels), kProbabilityFloor));
}

core::Var bce_loss(const core::Var& probs, std::span<const int> labels) {
  if (labels.empty()) throw DimensionError("bce_loss: empty batch");
  return ops::scale(log_likelihood(probs, labels), -1.0 / static_cast<double>(labels.size()));
}

}  // namespace srel::train
