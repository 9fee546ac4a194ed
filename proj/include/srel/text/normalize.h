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

#ifndef SREL_TEXT_NORMALIZE_H_
#define SREL_TEXT_NORMALIZE_H_

#include <string>
#include <string_view>
#include <vector>

namespace srel::text {

// Lowercases ASCII, collapses whitespace to single spaces and splits
// punctuation into standalone tokens. Symbols that commonly live inside
// product terms (% - / . + # & ') stay attached to their word, so "100%",
// "12v" and "wi-fi" remain single words; a trailing period is split off.
// Non-ASCII bytes pass through unchanged.
std::string normalize(std::string_view text);

// Whitespace-delimited words of an already normalized string.
std::vector<std::string> split_words(std::string_view normalized);

}  // namespace srel::text

#endif  // SREL_TEXT_NORMALIZE_H_
