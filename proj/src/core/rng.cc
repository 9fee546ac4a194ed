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

#include "srel/core/rng.h"

#include <cmath>
#include <numbers>

namespace srel::core {

uint64_t Rng::below(uint64_t n) {
  // Lemire-style rejection keeps the draw unbiased.
  const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
  uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

// Standard deviation of N(0,1) restricted to [-2, 2].
constexpr double kTruncatedStd = 0.87962566103423978;

double Rng::truncated_normal(double stddev) {
  if (stddev == 0.0) return 0.0;
  double z;
  do {
    z = normal();
  } while (std::abs(z) > 2.0);
  return z * stddev / kTruncatedStd;
}

}  // namespace srel::core
