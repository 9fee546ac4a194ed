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

#ifndef SREL_DATA_GENERATOR_H_
#define SREL_DATA_GENERATOR_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "srel/data/pairs.h"
#include "srel/text/lexicon.h"
#include "srel/text/vocab_builder.h"
#include "srel/text/vocabulary.h"

namespace srel::data {

// One product category: its subject noun, the fused core keywords that
// qualify it, and the unit tokens its listings carry.
struct CategorySpec {
  std::string subject;
  std::vector<std::string> core;
  std::vector<std::string> units;

  bool operator==(const CategorySpec&) const = default;
};

struct GenConfig {
  std::vector<CategorySpec> categories;
  // Generic attributes keyed by NER class (material, function, usage, style).
  std::map<int32_t, std::vector<std::string>> attributes;
  // Untagged marketing words.
  std::vector<std::string> fillers;
  // Pieces the fused core keywords are built from; they enter the base vocabulary.
  std::vector<std::string> morphemes;

  // Use only the first n categories; 0 keeps all.
  std::size_t n_categories = 0;
  std::size_t n_pairs = 12000;
  std::size_t n_queries = 2400;
  // Mean number of words from other categories stuffed into a title.
  double stuffing_rate = 2.0;
  double positive_fraction = 0.5;
  double query_unit_rate = 0.35;
  // Zipf exponent of query popularity.
  double zipf = 1.0;
  uint64_t seed = 1;

  // Built-in e-commerce lexicons.
  static GenConfig defaults();
  // Throws ConfigError on empty or overlapping lexicons, core keywords that
  // would be single tokens of the base vocabulary, or bad rates.
  void validate() const;
  std::vector<CategorySpec> active_categories() const;
};

void to_json(nlohmann::json& j, const GenConfig& c);
// Missing keys fall back to GenConfig::defaults().
void from_json(const nlohmann::json& j, GenConfig& c);

// Ground truth: a pair is relevant iff the first subject word of the title is
// the query's subject, every core keyword of the query occurs in the title, and
// the query's unit (if any) equals the title's first unit.
class RelevanceRule {
 public:
  RelevanceRule() = default;
  explicit RelevanceRule(const GenConfig& config);

  int32_t label(std::string_view query, std::string_view title) const;

  const std::set<std::string>& subjects() const { return subjects_; }
  const std::set<std::string>& core() const { return core_; }
  const std::set<std::string>& units() const { return units_; }

 private:
  std::set<std::string> subjects_;
  std::set<std::string> core_;
  std::set<std::string> units_;
};

struct Corpus {
  std::vector<LabeledPair> pairs;
  text::TermLexicon lexicon;
  text::WordCounts word_counts;
  RelevanceRule rule;
};

// Labels are exact under `rule`; the positive share is round(n * fraction) / n.
// Same config, same corpus.
Corpus generate_corpus(const GenConfig& config);

// Lexicon alone: subjects and core keywords as core, units as specification,
// attributes under their own class.
text::TermLexicon make_lexicon(const GenConfig& config);

// Whole words of the base inventory: morphemes, subjects, attributes and fillers.
std::vector<std::string> base_subwords(const GenConfig& config);
text::Vocabulary default_base_vocab();

}  // namespace srel::data

#endif  // SREL_DATA_GENERATOR_H_
