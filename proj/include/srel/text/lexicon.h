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

#ifndef SREL_TEXT_LEXICON_H_
#define SREL_TEXT_LEXICON_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace srel::text {

// NER categories of the term lexicon. 0 marks untagged (non-substantial) words.
enum class NerCategory : int32_t {
  kNone = 0,
  kMaterial = 1,
  kFunction = 2,
  kUsage = 3,
  kSpecification = 4,
  kStyle = 5,
  kCore = 6,
};

inline constexpr int32_t kNerTagCount = 7;

std::string_view category_name(NerCategory category);

// Gazetteer mapping words to NER categories. Keys are normalized, so lookups
// are case-insensitive.
class TermLexicon {
 public:
  // Throws ParameterError for categories outside [1, 6] or empty words.
  void add(std::string_view word, NerCategory category);
  void add(std::string_view word, int32_t category);

  NerCategory lookup(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, NerCategory>& entries() const { return entries_; }

  // TSV: word<TAB>category-int, one entry per line.
  static TermLexicon load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  std::map<std::string, NerCategory> entries_;
};

}  // namespace srel::text

#endif  // SREL_TEXT_LEXICON_H_
