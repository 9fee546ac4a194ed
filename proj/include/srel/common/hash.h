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

#ifndef SREL_COMMON_HASH_H_
#define SREL_COMMON_HASH_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace srel {

// 64-bit FNV-1a; stable across platforms, used for file fingerprints and cache keys.
constexpr uint64_t kFnvOffset = 14695981039346656037ull;

constexpr uint64_t fnv1a(std::string_view bytes, uint64_t state = kFnvOffset) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 1099511628211ull;
  }
  return state;
}

std::string hex64(uint64_t value);

// SplitMix64 finalizer; derives well-separated seeds from (seed, counter) pairs.
constexpr uint64_t mix_seed(uint64_t seed, uint64_t counter) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ull * (counter + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace srel

#endif  // SREL_COMMON_HASH_H_
