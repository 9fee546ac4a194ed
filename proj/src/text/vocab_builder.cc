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

#include "srel/text/vocab_builder.h"

#include <algorithm>
#include <set>

#include "srel/common/errors.h"
#include "srel/text/normalize.h"
#include "srel/text/wordpiece.h"

namespace srel::text {

WordCounts count_words(std::span<const std::string> texts) {
  WordCounts counts;
  for (const std::string& text : texts) {
    for (std::string& w : split_words(normalize(text))) ++counts[std::move(w)];
  }
  return counts;
}

std::vector<std::pair<std::string, uint64_t>> extension_candidates(const WordCounts& counts,
                                                                   const Vocabulary& base) {
  std::vector<std::pair<std::string, uint64_t>> out;
  for (const auto& [word, count] : counts) {
    if (count == 0 || base.contains(word)) continue;
    const std::vector<int32_t> ids = wordpiece_word(word, base);
    if (ids.size() >= 2) out.emplace_back(word, count);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

Vocabulary build_extended_vocab(const WordCounts& counts, const Vocabulary& base, std::size_t top_k) {
  if (top_k == 0) return base;
  auto ranked = extension_candidates(counts, base);
  std::vector<std::string> words;
  for (std::size_t i = 0; i < ranked.size() && i < top_k; ++i) words.push_back(std::move(ranked[i].first));
  return base.extend(words);
}

SubtokenStats subtoken_stats(std::span<const std::pair<std::string, std::string>> pairs, const Vocabulary& vocab) {
  if (pairs.empty()) throw ContractError("subtoken_stats: empty corpus");
  double pieces_total = 0, words_total = 0, title_total = 0;
  for (const auto& [query, title] : pairs) {
    const TokenizedText q = wordpiece_tokenize(query, vocab);
    const TokenizedText t = wordpiece_tokenize(title, vocab);
    pieces_total += static_cast<double>(q.size() + t.size());
    words_total += static_cast<double>(q.words.size() + t.words.size());
    title_total += static_cast<double>(t.size());
  }
  SubtokenStats s;
  s.per_word = words_total > 0 ? pieces_total / words_total : 0.0;
  s.per_title = title_total / static_cast<double>(pairs.size());
  s.per_pair = pieces_total / static_cast<double>(pairs.size());
  return s;
}

Vocabulary make_base_vocab(std::span<const std::string> subwords) {
  std::vector<std::string> tokens = {std::string(kPadToken), std::string(kUnkToken), std::string(kClsToken),
                                     std::string(kSepToken), std::string(kMaskToken)};
  std::set<std::string> seen(tokens.begin(), tokens.end());
  auto push = [&](std::string t) {
    if (!t.empty() && seen.insert(t).second) tokens.push_back(std::move(t));
  };
  for (int c = 0x21; c < 0x7f; ++c) {
    if (c >= 'A' && c <= 'Z') continue;
    push(std::string(1, static_cast<char>(c)));
  }
  for (int c = 0x21; c < 0x7f; ++c) {
    if (c >= 'A' && c <= 'Z') continue;
    push(std::string(kContinuationPrefix) + static_cast<char>(c));
  }
  for (const std::string& s : subwords) {
    push(s);
    push(std::string(kContinuationPrefix) + s);
  }
  return Vocabulary::from_tokens(std::move(tokens));
}

}  // namespace srel::text
