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

#include "srel/core/functional.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "srel/common/errors.h"

namespace srel::core {

void softmax_row(std::span<const double> z, double temperature, std::span<double> out) {
  double top = -INFINITY;
  for (double v : z) top = std::max(top, temperature * v);
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = std::exp(temperature * z[i] - top);
    total += out[i];
  }
  for (double& v : out) v /= total;
}

Tensor softmax(const Tensor& z, double temperature) {
  if (!(temperature > 0.0)) {
    throw ParameterError("softmax: temperature must be positive, got " + std::to_string(temperature));
  }
  Tensor out(z.shape());
  for (std::size_t r = 0; r < z.rows(); ++r) softmax_row(z.row(r), temperature, out.row(r));
  return out;
}

double kl_divergence(std::span<const double> p, std::span<const double> q, double floor) {
  if (p.size() != q.size()) {
    throw DimensionError("kl_divergence: length mismatch " + std::to_string(p.size()) + " vs " +
                         std::to_string(q.size()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    total += p[i] * (std::log(p[i] + floor) - std::log(q[i] + floor));
  }
  return std::max(total, 0.0);
}

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * std::numbers::sqrt2 / 2.0)); }

}  // namespace srel::core
