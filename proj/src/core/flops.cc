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

#include "srel/core/flops.h"

namespace srel::core {
namespace {
thread_local FlopCounts t_counts;
thread_local FlopKind t_kind = FlopKind::kOther;
}  // namespace

FlopCounts& flop_counter() { return t_counts; }

void reset_flop_counter() { t_counts = FlopCounts{}; }

void count_flops(FlopKind kind, uint64_t flops) {
  switch (kind) {
    case FlopKind::kAttention:
      t_counts.attention += flops;
      break;
    case FlopKind::kFeedForward:
      t_counts.feed_forward += flops;
      break;
    case FlopKind::kProjection:
      t_counts.projection += flops;
      break;
    case FlopKind::kOther:
      t_counts.other += flops;
      break;
  }
}

void count_flops(uint64_t flops) { count_flops(t_kind, flops); }

FlopScope::FlopScope(FlopKind kind) : previous_(t_kind) { t_kind = kind; }

FlopScope::~FlopScope() { t_kind = previous_; }

}  // namespace srel::core
