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

#include "srel/text/normalize.h"

#include <cctype>

namespace srel::text {
namespace {

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_joiner(unsigned char c) {
  switch (c) {
    case '%':
    case '-':
    case '/':
    case '.':
    case '+':
    case '#':
    case '&':
    case '\'':
      return true;
    default:
      return false;
  }
}

bool is_splitting_punct(unsigned char c) { return c < 0x80 && std::ispunct(c) && !is_joiner(c); }

void emit(std::string& word, std::vector<std::string>& out) {
  if (word.empty()) return;
  if (word.size() > 1 && word.back() == '.') {
    word.pop_back();
    out.push_back(word);
    out.emplace_back(".");
  } else {
    out.push_back(word);
  }
  word.clear();
}

}  // namespace

std::string normalize(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (unsigned char c : text) {
    if (is_space(c)) {
      emit(current, words);
    } else if (is_splitting_punct(c)) {
      emit(current, words);
      words.emplace_back(1, static_cast<char>(c));
    } else {
      current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
    }
  }
  emit(current, words);
  std::string out;
  for (const std::string& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

std::vector<std::string> split_words(std::string_view normalized) {
  std::vector<std::string> words;
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    while (pos < normalized.size() && is_space(static_cast<unsigned char>(normalized[pos]))) ++pos;
    std::size_t end = pos;
    while (end < normalized.size() && !is_space(static_cast<unsigned char>(normalized[end]))) ++end;
    if (end > pos) words.emplace_back(normalized.substr(pos, end - pos));
    pos = end;
  }
  return words;
}

}  // namespace srel::text
