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

#ifndef SREL_TEXT_VOCAB_BUILDER_H_
#define SREL_TEXT_VOCAB_BUILDER_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "srel/text/vocabulary.h"

namespace srel::text {

using WordCounts = std::map<std::string, uint64_t>;

// Word frequencies of the normalized texts.
WordCounts count_words(std::span<const std::string> texts);

// Words that split into two or more pieces under `base`, most frequent first,
// ties in lexicographic order.
std::vector<std::pair<std::string, uint64_t>> extension_candidates(const WordCounts& counts,
                                                                   const Vocabulary& base);

// Adds the top_k candidates as whole-word tokens.
Vocabulary build_extended_vocab(const WordCounts& counts, const Vocabulary& base, std::size_t top_k);

struct SubtokenStats {
  double per_word = 0;
  double per_title = 0;
  double per_pair = 0;
};

// Means over (query, title) pairs. Query and title pieces both count towards
// the per-pair figure; specials are not counted. Throws ContractError if empty.
SubtokenStats subtoken_stats(std::span<const std::pair<std::string, std::string>> pairs, const Vocabulary& vocab);

// Base inventory: specials, printable ASCII characters with "##" forms, and the
// given subwords (each whole and as a continuation).
Vocabulary make_base_vocab(std::span<const std::string> subwords);

}  // namespace srel::text

#endif  // SREL_TEXT_VOCAB_BUILDER_H_
