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

#ifndef SREL_CORE_RNG_H_
#define SREL_CORE_RNG_H_

#include <cstdint>
#include <random>

namespace srel::core {

// Seeded pseudo-random stream. Copying an Rng forks an identical stream, which
// is how two forward passes are made to see the same dropout masks.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  uint64_t seed() const { return seed_; }
  // Number of raw 64-bit draws consumed so far.
  uint64_t position() const { return position_; }

  uint64_t next() {
    ++position_;
    return engine_();
  }
  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, n); n must be positive.
  uint64_t below(uint64_t n);
  double normal();
  // Normal draw cut at two standard deviations, rescaled so the result has
  // standard deviation `stddev`.
  double truncated_normal(double stddev);

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
  uint64_t position_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace srel::core

#endif  // SREL_CORE_RNG_H_
