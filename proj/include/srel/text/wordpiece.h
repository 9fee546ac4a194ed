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

#ifndef SREL_TEXT_WORDPIECE_H_
#define SREL_TEXT_WORDPIECE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "srel/text/lexicon.h"
#include "srel/text/vocabulary.h"

namespace srel::text {

inline constexpr std::size_t kMaxWordChars = 100;

// Sub-token view of one normalized text. Pieces of a word are contiguous.
struct TokenizedText {
  std::vector<std::string> words;
  std::vector<int32_t> ids;
  std::vector<std::string> pieces;
  std::vector<int32_t> word_index;  // piece -> index into words
  std::vector<int32_t> ner;         // piece -> NER tag, 0 until tagged

  std::size_t size() const { return ids.size(); }
  bool empty() const { return ids.empty(); }
  // Strips "##" and rejoins pieces with single spaces between words.
  std::string detokenize() const;
  // First piece index of each word plus a final sentinel equal to size().
  std::vector<std::size_t> word_starts() const;
};

// Greedy longest-prefix split of a single word. Matches end on code point
// boundaries. Unmatchable words and words over kMaxWordChars give one [UNK].
std::vector<int32_t> wordpiece_word(std::string_view word, const Vocabulary& vocab);

// Normalizes `text` and tokenizes every word. NER tags are all 0.
TokenizedText wordpiece_tokenize(std::string_view text, const Vocabulary& vocab);

// Looks every word up in the lexicon and copies its category onto its pieces.
TokenizedText ner_tag(TokenizedText tokens, const TermLexicon& lexicon);

// Rebuilds a TokenizedText from a subset of its words (in order).
TokenizedText select_words(const TokenizedText& tokens, const std::vector<std::size_t>& keep);

// Vocabulary plus lexicon; tokenizes and tags in one call.
class Tokenizer {
 public:
  Tokenizer() = default;
  Tokenizer(Vocabulary vocab, TermLexicon lexicon) : vocab_(std::move(vocab)), lexicon_(std::move(lexicon)) {}

  TokenizedText operator()(std::string_view text) const { return ner_tag(wordpiece_tokenize(text, vocab_), lexicon_); }

  const Vocabulary& vocab() const { return vocab_; }
  const TermLexicon& lexicon() const { return lexicon_; }

 private:
  Vocabulary vocab_;
  TermLexicon lexicon_;
};

}  // namespace srel::text

#endif  // SREL_TEXT_WORDPIECE_H_
