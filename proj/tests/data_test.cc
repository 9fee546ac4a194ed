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

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "srel/common/errors.h"
#include "srel/core/rng.h"
#include "srel/data/generator.h"
#include "srel/data/pairs.h"
#include "srel/text/normalize.h"
#include "srel/text/wordpiece.h"

namespace srel::data {
namespace {

using core::Rng;

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("srel_data_test_" + name);
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

std::string random_text(Rng& rng) {
  static const std::vector<std::string> atoms = {"lamp", "12v", "Blue", "tooth", "caf\xc3\xa9", "\xe6\x89\x8b\xe6\x9c\xba",
                                                 "x-ray", "100%", "\"q\"", "a\\b", "{json}", "o'neil"};
  std::string s;
  const std::size_t n = 1 + rng.below(5);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += atoms[rng.below(atoms.size())];
  }
  return s;
}

std::vector<LabeledPair> random_pairs(Rng& rng, std::size_t n) {
  std::vector<LabeledPair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    LabeledPair p{random_text(rng), random_text(rng), std::nullopt, std::nullopt};
    if (rng.below(4)) p.label = static_cast<int32_t>(rng.below(2));
    if (rng.below(2)) p.click_level = static_cast<ClickLevel>(rng.below(5));
    pairs.push_back(std::move(p));
  }
  return pairs;
}

TEST_CASE("resample by click level") {
  LabeledPair pay{"q", "t", 1, ClickLevel::kPay};
  CHECK(resample_by_click(std::vector<LabeledPair>{pay}).size() == 5);
  LabeledPair click{"q", "t", 1, ClickLevel::kPageClick};
  CHECK(resample_by_click(std::vector<LabeledPair>{click}).size() == 1);
  CHECK(resample_by_click(std::vector<LabeledPair>{}).empty());

  Rng rng(3);
  auto pairs = random_pairs(rng, 300);
  std::map<int, std::size_t> histogram;
  for (const auto& p : pairs) ++histogram[p.click_level ? static_cast<int>(*p.click_level) : 0];
  const std::size_t weights[] = {1, 1, 2, 3, 5};
  std::size_t expected = 0;
  for (const auto& [level, count] : histogram) expected += weights[level] * count;
  const auto out = resample_by_click(pairs);
  CHECK(out.size() == expected);
  // Copies are contiguous and in input order.
  CHECK(out.front() == pairs.front());
  CHECK(out.back() == pairs.back());

  CHECK_THROWS_AS(parse_click_level("purchase"), InputError);
  CHECK(parse_click_level("contact-supplier") == ClickLevel::kContactSupplier);
  CHECK(click_level_name(ClickLevel::kAddToCart) == "add-to-cart");
}

TEST_CASE("pair files round trip") {
  Rng rng(11);
  const auto pairs = random_pairs(rng, 1000);
  for (const auto* ext : {".tsv", ".jsonl"}) {
    const auto path = temp_path(std::string("roundtrip") + ext);
    save_pairs(pairs, path);
    CHECK(load_pairs(path) == pairs);
    std::filesystem::remove(path);
  }
}

TEST_CASE("missing label column gives unlabeled pairs") {
  const auto pairs = parse_pairs("red dress\tlong red dress\nlamp\tdesk lamp\t\n", PairFormat::kTsv);
  REQUIRE(pairs.size() == 2);
  CHECK_FALSE(pairs[0].label.has_value());
  CHECK_FALSE(pairs[1].label.has_value());
  CHECK_THROWS_AS(labels(pairs), InputError);
  const auto json = parse_pairs("{\"query\":\"lamp\",\"title\":\"desk lamp\"}\n", PairFormat::kJsonl);
  CHECK_FALSE(json.at(0).label.has_value());
}

TEST_CASE("malformed lines name their line number") {
  const std::string tsv = "a\tb\t1\n\nc\td\t7\n";
  CHECK(message_of([&] { parse_pairs(tsv, PairFormat::kTsv); }).find("line 3") != std::string::npos);
  CHECK(message_of([&] { parse_pairs("a\n", PairFormat::kTsv); }).find("line 1") != std::string::npos);
  CHECK(message_of([&] { parse_pairs("a\t \t1\n", PairFormat::kTsv); }).find("title is empty") != std::string::npos);
  CHECK(message_of([&] { parse_pairs("a\tb\t1\tlike\n", PairFormat::kTsv); }).find("line 1") != std::string::npos);
  const std::string jsonl = "{\"query\":\"a\",\"title\":\"b\",\"label\":1}\n{\"query\":\"a\"}\n";
  CHECK(message_of([&] { parse_pairs(jsonl, PairFormat::kJsonl); }).find("line 2") != std::string::npos);
  CHECK(message_of([&] { parse_pairs("[1]\n", PairFormat::kJsonl); }).find("line 1") != std::string::npos);
}

TEST_CASE("invalid utf-8 names the byte offset") {
  const std::string bad = std::string("ok\tfine\t1\nbro") + '\xff' + "ken\tx\t0\n";
  const auto msg = message_of([&] { parse_pairs(bad, PairFormat::kTsv); });
  CHECK(msg.find("byte offset 13") != std::string::npos);
}

TEST_CASE("tsv rejects embedded tabs on save") {
  std::vector<LabeledPair> pairs = {{"a\tb", "c", 1, std::nullopt}};
  CHECK_THROWS_AS(format_pairs(pairs, PairFormat::kTsv), InputError);
  CHECK_NOTHROW(format_pairs(pairs, PairFormat::kJsonl));
}

TEST_CASE("query frequency ranking") {
  const std::vector<std::string> uniform = {"delta", "alpha", "charlie", "bravo"};
  const auto ranked = query_frequency(uniform);
  REQUIRE(ranked.size() == 4);
  CHECK(ranked[0].first == "alpha");
  CHECK(ranked[3].first == "delta");

  const std::vector<std::string> skewed = {"b", "zeta", "zeta", "a", "Zeta"};
  const auto top = query_frequency(skewed);
  CHECK(top[0] == QueryCount{"zeta", 3});

  std::vector<std::string> ten;
  for (int i = 0; i < 10; ++i) ten.push_back("q" + std::to_string(i));
  CHECK(top_fraction(query_frequency(ten), 0.2).size() == 2);
  CHECK(top_fraction(query_frequency(ten), 0.0).empty());
  CHECK(top_fraction(query_frequency(ten), 1.0).size() == 10);

  const auto path = temp_path("freq.tsv");
  save_frequency(top, path);
  CHECK(load_frequency(path) == top);
  std::filesystem::remove(path);
}

// Label oracle written against the config tables: the query's subject must be
// the earliest-positioned subject of the title, every query core word must be in
// the title, and a query unit must equal the earliest title unit.
int oracle_label(const GenConfig& config, const std::string& query, const std::string& title) {
  std::set<std::string> subjects, core, units;
  for (const auto& cat : config.active_categories()) {
    subjects.insert(cat.subject);
    core.insert(cat.core.begin(), cat.core.end());
    units.insert(cat.units.begin(), cat.units.end());
  }
  const auto q = text::split_words(text::normalize(query));
  const auto t = text::split_words(text::normalize(title));
  auto earliest = [](const std::vector<std::string>& words, const std::set<std::string>& set) {
    std::size_t best = words.size();
    for (const auto& s : set) {
      const auto it = std::find(words.begin(), words.end(), s);
      best = std::min(best, static_cast<std::size_t>(it - words.begin()));
    }
    return best == words.size() ? std::string() : words[best];
  };
  const auto qs = earliest(q, subjects);
  if (qs.empty() || qs != earliest(t, subjects)) return 0;
  for (const auto& w : q) {
    if (core.count(w) && std::find(t.begin(), t.end(), w) == t.end()) return 0;
  }
  const auto qu = earliest(q, units);
  if (!qu.empty() && qu != earliest(t, units)) return 0;
  return 1;
}

TEST_CASE("rule examples") {
  const auto config = GenConfig::defaults();
  const RelevanceRule rule(config);
  CHECK(rule.label("bluetooth speaker 10w", "new speaker bluetooth steel 10w") == 1);
  CHECK(rule.label("bluetooth speaker 10w", "new lamp bluetooth speaker 10w") == 0);
  CHECK(rule.label("bluetooth speaker 10w", "speaker bluetooth 20w") == 0);
  CHECK(rule.label("bluetooth speaker 10w", "speaker bluetooth") == 0);
  CHECK(rule.label("bluetooth waterproof speaker", "speaker bluetooth cotton") == 0);
  CHECK(rule.label("bluetooth speaker", "speaker loudmax bluetooth 60w") == 1);
  CHECK(rule.label("cotton speaker", "speaker") == 1);
}

TEST_CASE("generated corpus follows the rule exactly") {
  auto config = GenConfig::defaults();
  config.n_pairs = 3000;
  config.seed = 5;
  const Corpus corpus = generate_corpus(config);
  REQUIRE(corpus.pairs.size() == 3000);
  std::size_t positives = 0, mismatches = 0, stuffed = 0;
  std::map<std::string, std::string> core_owner;
  for (const auto& cat : config.categories) {
    for (const auto& w : cat.core) core_owner[w] = cat.subject;
  }
  for (const auto& p : corpus.pairs) {
    REQUIRE(p.label.has_value());
    positives += static_cast<std::size_t>(*p.label);
    mismatches += oracle_label(config, p.query, p.title) != *p.label;
    const auto words = text::split_words(p.title);
    std::set<std::string> owners;
    for (const auto& w : words) {
      if (core_owner.count(w)) owners.insert(core_owner[w]);
    }
    stuffed += owners.size() > 1;
    CHECK(p.click_level.has_value() == (*p.label == 1));
  }
  CHECK(mismatches == 0);
  CHECK(std::abs(static_cast<double>(positives) / 3000.0 - config.positive_fraction) <= 0.02);
  // Stuffing puts other categories' keywords into most titles.
  CHECK(stuffed > 1500);

  std::vector<std::string> all;
  for (const auto& p : corpus.pairs) {
    all.push_back(p.query);
    all.push_back(p.title);
  }
  CHECK(corpus.word_counts == text::count_words(all));
}

TEST_CASE("generator is deterministic per seed") {
  auto config = GenConfig::defaults();
  config.n_pairs = 500;
  const auto a = format_pairs(generate_corpus(config).pairs, PairFormat::kTsv);
  const auto b = format_pairs(generate_corpus(config).pairs, PairFormat::kTsv);
  CHECK(a == b);
  config.seed = 2;
  CHECK(format_pairs(generate_corpus(config).pairs, PairFormat::kTsv) != a);
}

TEST_CASE("positive fraction tracks the config") {
  for (double fraction : {0.2, 0.5, 0.7}) {
    auto config = GenConfig::defaults();
    config.n_pairs = 1000;
    config.positive_fraction = fraction;
    const auto corpus = generate_corpus(config);
    double pos = 0;
    for (const auto& p : corpus.pairs) pos += *p.label;
    CHECK(std::abs(pos / 1000.0 - fraction) <= 0.02);
  }
}

TEST_CASE("generator config validation") {
  auto config = GenConfig::defaults();
  config.categories.clear();
  CHECK_THROWS_AS(generate_corpus(config), ConfigError);

  config = GenConfig::defaults();
  config.fillers.push_back("cotton");
  CHECK_THROWS_AS(config.validate(), ConfigError);

  config = GenConfig::defaults();
  config.categories[0].core.push_back("lamp");
  CHECK_THROWS_AS(config.validate(), ConfigError);

  config = GenConfig::defaults();
  config.positive_fraction = 1.0;
  CHECK_THROWS_AS(config.validate(), ConfigError);

  config = GenConfig::defaults();
  config.categories[0].core.push_back("blue");
  CHECK_THROWS_AS(config.validate(), ConfigError);

  config = GenConfig::defaults();
  config.n_categories = 3;
  CHECK_NOTHROW(config.validate());
  CHECK(RelevanceRule(config).subjects().size() == 3);
}

TEST_CASE("generator config json round trip") {
  auto config = GenConfig::defaults();
  config.seed = 9;
  config.stuffing_rate = 3.5;
  nlohmann::json j = config;
  GenConfig back = j.get<GenConfig>();
  CHECK(back.seed == 9);
  CHECK(back.stuffing_rate == 3.5);
  CHECK(back.categories == config.categories);
  CHECK(back.attributes == config.attributes);
  const GenConfig partial = nlohmann::json{{"seed", 4}}.get<GenConfig>();
  CHECK(partial.categories == config.categories);
  CHECK(partial.seed == 4);
}

TEST_CASE("fused core keywords split under the base vocabulary") {
  const auto config = GenConfig::defaults();
  const auto base = default_base_vocab();
  for (const auto& cat : config.categories) {
    CHECK(text::wordpiece_tokenize(cat.subject, base).size() == 1);
    for (const auto& w : cat.core) CHECK(text::wordpiece_tokenize(w, base).size() >= 2);
  }
  const auto pieces = text::wordpiece_tokenize("bluetooth", base).pieces;
  CHECK(pieces == std::vector<std::string>{"blue", "##tooth"});
}

TEST_CASE("lexicon covers the generator vocabulary") {
  const auto config = GenConfig::defaults();
  const auto lexicon = make_lexicon(config);
  CHECK(lexicon.lookup("speaker") == text::NerCategory::kCore);
  CHECK(lexicon.lookup("bluetooth") == text::NerCategory::kCore);
  CHECK(lexicon.lookup("10w") == text::NerCategory::kSpecification);
  CHECK(lexicon.lookup("cotton") == text::NerCategory::kMaterial);
  CHECK(lexicon.lookup("vintage") == text::NerCategory::kStyle);
  CHECK(lexicon.lookup("wholesale") == text::NerCategory::kNone);
}

}  // namespace
}  // namespace srel::data
