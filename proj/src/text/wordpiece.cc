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

#include "srel/text/wordpiece.h"

#include "srel/common/utf8.h"
#include "srel/text/normalize.h"

namespace srel::text {

std::string TokenizedText::detokenize() const {
  std::string out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    std::string_view p = pieces[i];
    if (i > 0 && word_index[i] != word_index[i - 1]) out.push_back(' ');
    if (p.starts_with(kContinuationPrefix)) p.remove_prefix(kContinuationPrefix.size());
    out.append(p);
  }
  return out;
}

std::vector<std::size_t> TokenizedText::word_starts() const {
  std::vector<std::size_t> starts;
  starts.reserve(words.size() + 1);
  for (std::size_t i = 0; i < word_index.size(); ++i) {
    if (i == 0 || word_index[i] != word_index[i - 1]) starts.push_back(i);
  }
  starts.push_back(word_index.size());
  return starts;
}

std::vector<int32_t> wordpiece_word(std::string_view word, const Vocabulary& vocab) {
  std::vector<std::size_t> bounds;
  for (std::size_t pos = 0; pos < word.size(); pos += utf8_sequence_length(word, pos)) bounds.push_back(pos);
  bounds.push_back(word.size());
  const std::size_t chars = bounds.size() - 1;
  if (chars == 0) return {};
  if (chars > kMaxWordChars) return {vocab.unk_id()};

  std::vector<int32_t> ids;
  std::string candidate;
  std::size_t start = 0;
  while (start < chars) {
    std::size_t end = chars;
    std::optional<int32_t> hit;
    for (; end > start; --end) {
      candidate.clear();
      if (start > 0) candidate.append(kContinuationPrefix);
      candidate.append(word.substr(bounds[start], bounds[end] - bounds[start]));
      hit = vocab.find(candidate);
      if (hit) break;
    }
    if (!hit) return {vocab.unk_id()};
    ids.push_back(*hit);
    start = end;
  }
  return ids;
}

TokenizedText wordpiece_tokenize(std::string_view text, const Vocabulary& vocab) {
  TokenizedText out;
  out.words = split_words(normalize(text));
  for (std::size_t w = 0; w < out.words.size(); ++w) {
    for (int32_t id : wordpiece_word(out.words[w], vocab)) {
      out.ids.push_back(id);
      out.pieces.push_back(vocab.token(id));
      out.word_index.push_back(static_cast<int32_t>(w));
      out.ner.push_back(0);
    }
  }
  return out;
}

TokenizedText ner_tag(TokenizedText tokens, const TermLexicon& lexicon) {
  std::vector<int32_t> tags(tokens.words.size());
  for (std::size_t w = 0; w < tokens.words.size(); ++w) tags[w] = static_cast<int32_t>(lexicon.lookup(tokens.words[w]));
  for (std::size_t i = 0; i < tokens.ids.size(); ++i) tokens.ner[i] = tags[tokens.word_index[i]];
  return tokens;
}

TokenizedText select_words(const TokenizedText& tokens, const std::vector<std::size_t>& keep) {
  TokenizedText out;
  for (std::size_t w : keep) {
    const int32_t new_index = static_cast<int32_t>(out.words.size());
    out.words.push_back(tokens.words.at(w));
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens.word_index[i] != static_cast<int32_t>(w)) continue;
      out.ids.push_back(tokens.ids[i]);
      out.pieces.push_back(tokens.pieces[i]);
      out.word_index.push_back(new_index);
      out.ner.push_back(tokens.ner[i]);
    }
  }
  return out;
}

}  // namespace srel::text
