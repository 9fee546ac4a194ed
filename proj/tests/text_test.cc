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

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "srel/common/errors.h"
#include "srel/core/rng.h"
#include "srel/text/lexicon.h"
#include "srel/text/normalize.h"
#include "srel/text/vocab_builder.h"
#include "srel/text/vocabulary.h"
#include "srel/text/wordpiece.h"

namespace srel::text {
namespace {

Vocabulary small_base() {
  const std::vector<std::string> subwords = {"blue", "tooth", "cot", "ton", "water", "proof", "red"};
  return make_base_vocab(subwords);
}

std::vector<std::string> pieces_of(const TokenizedText& t) { return t.pieces; }

TEST_CASE("normalize examples") {
  CHECK(normalize("New  Apple Discount") == "new apple discount");
  CHECK(normalize("100%") == "100%");
  CHECK(normalize("") == "");
  CHECK(normalize("  \t ") == "");
  CHECK(normalize("Wi-Fi, 12V!") == "wi-fi , 12v !");
  CHECK(normalize("end.") == "end .");
  CHECK(normalize("caf\xc3\xa9 Bar") == "caf\xc3\xa9 bar");
  CHECK(normalize(normalize("Hello,World  (x)")) == normalize("Hello,World  (x)"));
}

TEST_CASE("vocabulary specials and layout") {
  Vocabulary v;
  CHECK(v.size() == 5);
  CHECK(v.pad_id() == 0);
  CHECK(v.token(0) == "[PAD]");
  CHECK(v.find("[UNK]") == v.unk_id());
  CHECK(v.is_special(v.cls_id()));
  CHECK_THROWS_AS(Vocabulary::from_tokens({"[UNK]", "[PAD]", "[CLS]", "[SEP]", "[MASK]"}), ConfigError);
  CHECK_THROWS_AS(Vocabulary::from_tokens({"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "a", "a"}), ConfigError);
  CHECK_THROWS_AS(Vocabulary::from_tokens({"[PAD]", "[UNK]", "[CLS]"}), ConfigError);
  CHECK_THROWS_AS(v.token(99), BoundsError);
}

TEST_CASE("vocabulary extend and round trip") {
  Vocabulary base = small_base();
  const std::vector<std::string> words = {"bluetooth", "blue", "bluetooth"};
  Vocabulary ext = base.extend(words);
  CHECK(ext.size() == base.size() + 1);
  CHECK(ext.base_size() == base.size());
  REQUIRE(ext.extension().size() == 1);
  CHECK(ext.extension()[0] == "bluetooth");
  CHECK(ext.fingerprint() != base.fingerprint());

  const auto path = std::filesystem::temp_directory_path() / "srel_vocab_test.txt";
  ext.save(path);
  Vocabulary back = Vocabulary::load(path);
  CHECK(back.fingerprint() == ext.fingerprint());
  CHECK(back.find("bluetooth") == ext.find("bluetooth"));
  std::filesystem::remove(path);
}

TEST_CASE("wordpiece splits bluetooth under the base vocabulary") {
  Vocabulary base = small_base();
  CHECK_FALSE(base.contains("bluetooth"));
  TokenizedText t = wordpiece_tokenize("bluetooth", base);
  CHECK(pieces_of(t) == std::vector<std::string>{"blue", "##tooth"});
  const std::vector<std::string> words = {"bluetooth"};
  Vocabulary ext = base.extend(words);
  CHECK(pieces_of(wordpiece_tokenize("Bluetooth", ext)) == std::vector<std::string>{"bluetooth"});
}

TEST_CASE("wordpiece unknowns") {
  Vocabulary base = small_base();
  TokenizedText t = wordpiece_tokenize("\xe2\x98\x83", base);
  REQUIRE(t.size() == 1);
  CHECK(t.ids[0] == base.unk_id());
  TokenizedText mixed = wordpiece_tokenize("red \xe2\x98\x83x blue", base);
  CHECK(mixed.words.size() == 3);
  CHECK(mixed.ids[1] == base.unk_id());
  CHECK(mixed.pieces.size() == 3);
  CHECK(wordpiece_word(std::string(kMaxWordChars, 'a'), base).size() == kMaxWordChars);
  CHECK(wordpiece_word(std::string(kMaxWordChars + 1, 'a'), base) == std::vector<int32_t>{base.unk_id()});
  CHECK(wordpiece_tokenize("", base).empty());
}

TEST_CASE("detokenize reproduces the normalized text") {
  Vocabulary base = small_base();
  core::Rng rng(5);
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyz0123456789%-/.+&,!()";
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const int words = 1 + static_cast<int>(rng.below(8));
    for (int w = 0; w < words; ++w) {
      if (w) text += rng.below(2) ? " " : "   ";
      const int len = 1 + static_cast<int>(rng.below(12));
      for (int c = 0; c < len; ++c) text += alphabet[rng.below(alphabet.size())];
    }
    TokenizedText t = wordpiece_tokenize(text, base);
    CHECK(t.detokenize() == normalize(text));
  }
}

TEST_CASE("extending never lengthens a text") {
  Vocabulary base = small_base();
  const std::vector<std::string> texts = {"bluetooth waterproof cotton", "red bluetooth speaker",
                                          "waterproof red cotton shirt", "cotton cotton bluetooth"};
  WordCounts counts = count_words(texts);
  for (std::size_t k = 0; k <= 6; ++k) {
    Vocabulary ext = build_extended_vocab(counts, base, k);
    for (const std::string& text : texts) {
      CHECK(wordpiece_tokenize(text, ext).size() <= wordpiece_tokenize(text, base).size());
    }
  }
}

TEST_CASE("build_extended_vocab ranking") {
  Vocabulary base = small_base();
  SUBCASE("top_k zero leaves the vocabulary unchanged") {
    WordCounts counts = {{"bluetooth", 5}};
    Vocabulary same = build_extended_vocab(counts, base, 0);
    CHECK(same.fingerprint() == base.fingerprint());
    CHECK(same.extension().empty());
  }
  SUBCASE("single-piece words are never added") {
    WordCounts counts = {{"blue", 100}, {"bluetooth", 1}};
    Vocabulary ext = build_extended_vocab(counts, base, 5);
    REQUIRE(ext.extension().size() == 1);
    CHECK(ext.extension()[0] == "bluetooth");
  }
  SUBCASE("most frequent multi-piece word wins top_k=1") {
    const std::vector<std::string> corpus = {"bluetooth waterproof", "bluetooth cotton", "bluetooth", "red cotton"};
    WordCounts counts = count_words(corpus);
    // Brute force: count multi-piece words by hand.
    std::map<std::string, int> manual;
    for (const std::string& line : corpus) {
      for (const std::string& w : split_words(normalize(line))) {
        if (wordpiece_word(w, base).size() >= 2) ++manual[w];
      }
    }
    std::string best;
    int best_count = -1;
    for (const auto& [w, c] : manual) {
      if (c > best_count) best = w, best_count = c;
    }
    Vocabulary ext = build_extended_vocab(counts, base, 1);
    REQUIRE(ext.extension().size() == 1);
    CHECK(ext.extension()[0] == best);
    CHECK(best == "bluetooth");
  }
  SUBCASE("ties break lexicographically") {
    WordCounts counts = {{"waterproof", 3}, {"cotton", 3}, {"bluetooth", 3}};
    Vocabulary ext = build_extended_vocab(counts, base, 2);
    REQUIRE(ext.extension().size() == 2);
    CHECK(ext.extension()[0] == "bluetooth");
    CHECK(ext.extension()[1] == "cotton");
  }
  SUBCASE("fewer candidates than top_k adds all") {
    WordCounts counts = {{"cotton", 1}};
    CHECK(build_extended_vocab(counts, base, 100).extension().size() == 1);
  }
}

TEST_CASE("ner tags propagate to every piece") {
  Vocabulary base = small_base();
  TermLexicon lexicon;
  lexicon.add("Cotton", NerCategory::kMaterial);
  lexicon.add("waterproof", 2);
  CHECK(lexicon.lookup("COTTON") == NerCategory::kMaterial);
  CHECK_THROWS_AS(lexicon.add("x", 7), ParameterError);
  CHECK_THROWS_AS(lexicon.add("x", 0), ParameterError);
  Tokenizer tok(base, lexicon);
  TokenizedText t = tok("cotton waterproof red");
  REQUIRE(t.pieces.size() == 5);
  CHECK(t.pieces[0] == "cot");
  CHECK(t.pieces[1] == "##ton");
  CHECK(t.ner == std::vector<int32_t>{1, 1, 2, 2, 0});
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t.word_index[i] == t.word_index[i - 1]) CHECK(t.ner[i] == t.ner[i - 1]);
  }
  TokenizedText kept = select_words(t, {0, 2});
  CHECK(kept.detokenize() == "cotton red");
  CHECK(kept.ner == std::vector<int32_t>{1, 1, 0});
}

TEST_CASE("lexicon tsv round trip and errors") {
  TermLexicon lexicon;
  lexicon.add("steel", 1);
  lexicon.add("dress", 6);
  const auto path = std::filesystem::temp_directory_path() / "srel_lexicon_test.tsv";
  lexicon.save(path);
  TermLexicon back = TermLexicon::load(path);
  CHECK(back.entries() == lexicon.entries());
  {
    std::ofstream out(path);
    out << "steel\t1\nbad line\n";
  }
  CHECK_THROWS_AS(TermLexicon::load(path), InputError);
  std::filesystem::remove(path);
}

TEST_CASE("subtoken stats") {
  const std::vector<std::string> sub = {"shirt"};
  Vocabulary base = make_base_vocab(sub);
  const std::vector<std::pair<std::string, std::string>> one = {{"shirt", "shirt"}};
  SubtokenStats s = subtoken_stats(one, base);
  CHECK(s.per_word == doctest::Approx(1.0));
  CHECK(s.per_title == doctest::Approx(1.0));
  CHECK(s.per_pair == doctest::Approx(2.0));
  CHECK_THROWS_AS(subtoken_stats(std::span<const std::pair<std::string, std::string>>(), base), ContractError);

  const std::vector<std::pair<std::string, std::string>> pairs = {{"bluetooth", "bluetooth red cotton"},
                                                                  {"cotton", "waterproof cotton bluetooth"}};
  Vocabulary small = small_base();
  std::vector<std::string> texts;
  for (const auto& [q, t] : pairs) texts.push_back(q), texts.push_back(t);
  Vocabulary ext = build_extended_vocab(count_words(texts), small, 10);
  CHECK(subtoken_stats(pairs, ext).per_pair < subtoken_stats(pairs, small).per_pair);
}

}  // namespace
}  // namespace srel::text
