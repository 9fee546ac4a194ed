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

#ifndef SREL_CORE_FLOPS_H_
#define SREL_CORE_FLOPS_H_

#include <cstdint>

namespace srel::core {

// Categories for the instrumented forward-pass FLOP counter.
enum class FlopKind { kOther = 0, kAttention, kFeedForward, kProjection };

struct FlopCounts {
  uint64_t attention = 0;     // score and context products plus softmax
  uint64_t feed_forward = 0;  // FFN sub-layer
  uint64_t projection = 0;    // Q/K/V/output projections
  uint64_t other = 0;

  uint64_t total() const { return attention + feed_forward + projection + other; }
};

// Per-thread counters; forward kernels add to the currently scoped kind.
FlopCounts& flop_counter();
void reset_flop_counter();
void count_flops(uint64_t flops);
void count_flops(FlopKind kind, uint64_t flops);

// Routes count_flops(uint64_t) to `kind` for the scope's lifetime.
class FlopScope {
 public:
  explicit FlopScope(FlopKind kind);
  ~FlopScope();
  FlopScope(const FlopScope&) = delete;
  FlopScope& operator=(const FlopScope&) = delete;

 private:
  FlopKind previous_;
};

}  // namespace srel::core

#endif  // SREL_CORE_FLOPS_H_
