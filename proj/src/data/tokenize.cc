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

#include "srel/data/tokenize.h"

namespace srel::data {

std::vector<batching::TokenizedPair> tokenize_pairs(std::span<const LabeledPair> pairs,
                                                    const text::Tokenizer& tokenizer) {
  std::vector<batching::TokenizedPair> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back({tokenizer(p.query), tokenizer(p.title), p.label.value_or(0)});
  return out;
}

}  // namespace srel::data
