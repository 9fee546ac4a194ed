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

#include "srel/data/generator.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "srel/common/errors.h"
#include "srel/core/rng.h"
#include "srel/text/normalize.h"

namespace srel::data {

namespace {

struct CategoryTemplate {
  const char* subject;
  std::vector<std::pair<const char*, const char*>> core;
  std::vector<const char*> units;
};

const std::vector<CategoryTemplate>& category_templates() {
  static const std::vector<CategoryTemplate> table = {
      {"speaker",
       {{"blue", "tooth"}, {"water", "proof"}, {"bass", "boost"}, {"hands", "free"}, {"loud", "max"}},
       {"5w", "10w", "20w", "40w", "60w"}},
      {"headphone",
       {{"ear", "bud"}, {"noise", "cancel"}, {"over", "ear"}, {"wire", "less"}, {"sweat", "proof"}},
       {"300mah", "500mah", "800mah"}},
      {"charger",
       {{"fast", "charge"}, {"multi", "port"}, {"plug", "fold"}, {"auto", "stop"}, {"smart", "chip"}},
       {"18w", "20w", "33w", "65w", "100w"}},
      {"cable",
       {{"nylon", "braid"}, {"fast", "sync"}, {"flat", "wire"}, {"magnet", "tip"}, {"tangle", "proof"}},
       {"1m", "2m", "3m", "5m"}},
      {"lamp",
       {{"night", "glow"}, {"sun", "light"}, {"touch", "dim"}, {"star", "light"}, {"moon", "beam"}},
       {"5w", "10w", "20w", "40w"}},
      {"drill",
       {{"cord", "less"}, {"hammer", "hit"}, {"key", "less"}, {"brush", "less"}, {"power", "grip"}},
       {"12v", "18v", "20v", "36v"}},
      {"battery",
       {{"long", "life"}, {"deep", "cycle"}, {"lead", "acid"}, {"solar", "cell"}, {"quick", "swap"}},
       {"6v", "12v", "24v", "48v"}},
      {"kettle",
       {{"stain", "less"}, {"boil", "stop"}, {"keep", "warm"}, {"cool", "wall"}, {"quick", "boil"}},
       {"1l", "1.5l", "1.7l", "2l"}},
      {"bottle",
       {{"leak", "proof"}, {"cold", "keep"}, {"flip", "cap"}, {"sport", "sip"}, {"straw", "lid"}},
       {"350ml", "500ml", "750ml", "1l"}},
      {"mug",
       {{"warm", "touch"}, {"steam", "lid"}, {"hand", "grip"}, {"color", "shift"}, {"dish", "safe"}},
       {"250ml", "350ml", "450ml"}},
      {"dress",
       {{"sequin", "shine"}, {"waist", "belt"}, {"long", "sleeve"}, {"flower", "print"}, {"party", "glam"}},
       {"xs", "s", "m", "l", "xl"}},
      {"shirt",
       {{"slim", "fit"}, {"button", "down"}, {"quick", "dry"}, {"wrinkle", "free"}, {"stretch", "weave"}},
       {"s", "m", "l", "xl", "xxl"}},
      {"jacket",
       {{"rain", "shell"}, {"wind", "break"}, {"down", "fill"}, {"fleece", "lined"}, {"snow", "guard"}},
       {"s", "m", "l", "xl", "xxl"}},
      {"sneaker",
       {{"air", "sole"}, {"run", "flex"}, {"mesh", "knit"}, {"anti", "slip"}, {"lace", "less"}},
       {"eu38", "eu40", "eu42", "eu44"}},
      {"backpack",
       {{"laptop", "safe"}, {"zip", "guard"}, {"rain", "cover"}, {"anti", "theft"}, {"hip", "belt"}},
       {"20l", "30l", "40l", "50l"}},
      {"tent",
       {{"pop", "up"}, {"twin", "wall"}, {"storm", "flap"}, {"sun", "shade"}, {"floor", "seal"}},
       {"1p", "2p", "3p", "4p"}},
      {"hose",
       {{"kink", "free"}, {"spray", "head"}, {"quick", "link"}, {"flex", "coil"}, {"reel", "mount"}},
       {"10m", "15m", "20m", "30m"}},
      {"blender",
       {{"ice", "crush"}, {"pulse", "mix"}, {"blend", "jar"}, {"smoothie", "max"}, {"self", "clean"}},
       {"300w", "600w", "1000w"}},
      {"watch",
       {{"heart", "rate"}, {"step", "count"}, {"sleep", "track"}, {"sapphire", "glass"}, {"gps", "link"}},
       {"38mm", "40mm", "42mm", "44mm"}},
      {"case",
       {{"shock", "proof"}, {"flip", "cover"}, {"card", "slot"}, {"kick", "stand"}, {"clear", "back"}},
       {"5.8in", "6.1in", "6.5in", "6.7in"}},
  };
  return table;
}

const std::vector<std::string>& unit_suffixes() {
  static const std::vector<std::string> s = {"w", "v", "m", "l", "ml", "mah", "mm", "in", "p", "eu"};
  return s;
}

using Words = std::vector<std::string>;

bool contains(const Words& words, const std::string& w) { return std::find(words.begin(), words.end(), w) != words.end(); }

std::string join(const Words& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

template <class T>
const T& pick(const std::vector<T>& v, core::Rng& rng) {
  return v[rng.below(v.size())];
}

template <class T>
void shuffle(std::vector<T>& v, core::Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

// Draws k distinct elements in random order.
Words sample(const Words& pool, std::size_t k, core::Rng& rng) {
  Words copy = pool;
  shuffle(copy, rng);
  copy.resize(std::min(k, copy.size()));
  return copy;
}

std::size_t poisson(double mean, core::Rng& rng) {
  const double limit = std::exp(-mean);
  double p = rng.uniform();
  std::size_t k = 0;
  while (p > limit) {
    p *= rng.uniform();
    ++k;
  }
  return k;
}

struct Query {
  std::size_t category;
  Words core;
  std::string unit;
  std::string text;
};

class Generator {
 public:
  explicit Generator(const GenConfig& config)
      : config_(config), categories_(config.active_categories()), rng_(config.seed) {
    for (const auto& [cls, words] : config_.attributes) attributes_.insert(attributes_.end(), words.begin(), words.end());
    for (std::size_t c = 0; c < categories_.size(); ++c) {
      for (std::size_t o = 0; o < categories_.size(); ++o) {
        if (o == c) continue;
        foreign_core_[c].insert(foreign_core_[c].end(), categories_[o].core.begin(), categories_[o].core.end());
        foreign_subjects_[c].push_back(categories_[o].subject);
      }
    }
    style_and_fillers_ = config_.fillers;
    if (auto it = config_.attributes.find(static_cast<int32_t>(text::NerCategory::kStyle));
        it != config_.attributes.end()) {
      style_and_fillers_.insert(style_and_fillers_.end(), it->second.begin(), it->second.end());
    }
  }

  std::vector<Query> make_queries() {
    std::vector<Query> queries;
    std::set<std::string> seen;
    const std::size_t attempts = config_.n_queries * 50;
    for (std::size_t a = 0; a < attempts && queries.size() < config_.n_queries; ++a) {
      Query q;
      q.category = rng_.below(categories_.size());
      const auto& cat = categories_[q.category];
      q.core = sample(cat.core, 1 + rng_.below(2), rng_);
      Words words;
      if (rng_.uniform() < 0.3) words.push_back(pick(attributes_, rng_));
      words.insert(words.end(), q.core.begin(), q.core.end());
      words.push_back(cat.subject);
      if (rng_.uniform() < config_.query_unit_rate) {
        q.unit = pick(cat.units, rng_);
        words.push_back(q.unit);
      }
      q.text = join(words);
      if (seen.insert(q.text).second) queries.push_back(std::move(q));
    }
    return queries;
  }

  // Title of category c that carries `required` core words and, if given, `unit`.
  // Core words in `banned` are kept out of the category's own extras.
  Words title(std::size_t c, const Words& required, const Words& banned, const std::string& unit, bool unit_allowed) {
    const auto& cat = categories_[c];
    Words head;
    const std::size_t pre = rng_.below(3);
    for (std::size_t i = 0; i < pre; ++i) head.push_back(pick(style_and_fillers_, rng_));
    head.push_back(cat.subject);

    Words bag = required;
    Words extras;
    for (const auto& w : cat.core) {
      if (!contains(required, w) && !contains(banned, w)) extras.push_back(w);
    }
    for (const auto& w : sample(extras, rng_.below(3), rng_)) bag.push_back(w);
    for (const auto& w : sample(attributes_, 1 + rng_.below(3), rng_)) bag.push_back(w);
    if (!unit.empty()) {
      bag.push_back(unit);
    } else if (unit_allowed && rng_.uniform() < 0.8) {
      bag.push_back(pick(cat.units, rng_));
    }
    const std::size_t stuffing = std::min<std::size_t>(poisson(config_.stuffing_rate, rng_), 6);
    for (std::size_t i = 0; i < stuffing; ++i) {
      if (rng_.uniform() < 0.2 && !foreign_subjects_[c].empty()) {
        bag.push_back(pick(foreign_subjects_[c], rng_));
      } else if (!foreign_core_[c].empty()) {
        bag.push_back(pick(foreign_core_[c], rng_));
      }
    }
    const std::size_t fill = rng_.below(3);
    for (std::size_t i = 0; i < fill; ++i) bag.push_back(pick(config_.fillers, rng_));
    shuffle(bag, rng_);
    head.insert(head.end(), bag.begin(), bag.end());
    return head;
  }

  Words positive(const Query& q) { return title(q.category, q.core, {}, q.unit, true); }

  Words negative(const Query& q) {
    const double u = rng_.uniform();
    const std::size_t n_cat = categories_.size();
    if (u < 0.3 && n_cat > 1) {
      // Wrong subject, often with the query's core words and its subject stuffed in.
      std::size_t other = rng_.below(n_cat - 1);
      if (other >= q.category) ++other;
      Words required = rng_.uniform() < 0.7 ? q.core : Words{};
      Words t = title(other, required, {}, rng_.uniform() < 0.5 ? q.unit : std::string(), true);
      if (rng_.uniform() < 0.3) t.insert(t.begin() + static_cast<std::ptrdiff_t>(1 + rng_.below(t.size())), categories_[q.category].subject);
      return t;
    }
    const bool unit_case = u >= 0.6 && u < 0.85 && !q.unit.empty();
    if (u < 0.85 && !unit_case) {
      // Same subject, at least one query core word missing.
      Words kept;
      Words dropped;
      const std::size_t drop = q.core.size() == 1 ? 0 : rng_.below(q.core.size());
      for (std::size_t i = 0; i < q.core.size(); ++i) {
        if (i == drop || rng_.uniform() < 0.3) {
          dropped.push_back(q.core[i]);
        } else {
          kept.push_back(q.core[i]);
        }
      }
      return title(q.category, kept, dropped, q.unit, true);
    }
    if (unit_case) {
      // Same subject and core words, incompatible or missing unit.
      if (rng_.uniform() < 0.3) return title(q.category, q.core, {}, "", false);
      Words others;
      for (const auto& w : categories_[q.category].units) {
        if (w != q.unit) others.push_back(w);
      }
      if (!others.empty()) return title(q.category, q.core, {}, pick(others, rng_), true);
    }
    // Unrelated listing.
    std::size_t other = n_cat > 1 ? rng_.below(n_cat - 1) : 0;
    if (n_cat > 1 && other >= q.category) ++other;
    const auto& cat = categories_[other];
    return title(other, sample(cat.core, 1 + rng_.below(2), rng_), {}, "", true);
  }

  core::Rng& rng() { return rng_; }

 private:
  const GenConfig& config_;
  std::vector<CategorySpec> categories_;
  core::Rng rng_;
  Words attributes_;
  Words style_and_fillers_;
  std::map<std::size_t, Words> foreign_core_;
  std::map<std::size_t, Words> foreign_subjects_;
};

// Zipf sampler over ranks 0..n-1.
class Zipf {
 public:
  Zipf(std::size_t n, double s) : cdf_(n) {
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      total += 1.0 / std::pow(static_cast<double>(i + 1), s);
      cdf_[i] = total;
    }
    for (auto& c : cdf_) c /= total;
  }
  std::size_t operator()(core::Rng& rng) const {
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), rng.uniform());
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

ClickLevel draw_click(core::Rng& rng) {
  const double u = rng.uniform();
  if (u < 0.6) return ClickLevel::kPageClick;
  if (u < 0.75) return ClickLevel::kAddToCart;
  if (u < 0.87) return ClickLevel::kContactSupplier;
  if (u < 0.95) return ClickLevel::kOrder;
  return ClickLevel::kPay;
}

}  // namespace

GenConfig GenConfig::defaults() {
  GenConfig c;
  std::set<std::string> morphemes;
  for (const auto& t : category_templates()) {
    CategorySpec spec;
    spec.subject = t.subject;
    for (const auto& [a, b] : t.core) {
      spec.core.push_back(std::string(a) + b);
      morphemes.insert(a);
      morphemes.insert(b);
    }
    spec.units.assign(t.units.begin(), t.units.end());
    c.categories.push_back(std::move(spec));
  }
  c.morphemes.assign(morphemes.begin(), morphemes.end());
  c.morphemes.insert(c.morphemes.end(), unit_suffixes().begin(), unit_suffixes().end());
  c.attributes[static_cast<int32_t>(text::NerCategory::kMaterial)] = {
      "cotton", "steel", "leather", "plastic", "wooden", "silk", "nylon", "rubber",
      "glass", "aluminum", "bamboo", "wool", "ceramic", "linen", "denim", "silicone"};
  c.attributes[static_cast<int32_t>(text::NerCategory::kFunction)] = {
      "portable", "foldable", "rechargeable", "adjustable", "washable", "durable",
      "lightweight", "breathable", "reusable", "dimmable", "compact", "insulated"};
  c.attributes[static_cast<int32_t>(text::NerCategory::kUsage)] = {
      "outdoor", "kitchen", "office", "travel", "sport", "garden", "camping",
      "party", "home", "car", "beach", "gym", "kids", "wedding"};
  c.attributes[static_cast<int32_t>(text::NerCategory::kStyle)] = {
      "vintage", "modern", "elegant", "casual", "classic", "luxury",
      "minimalist", "retro", "cute", "fashion", "summer", "winter"};
  c.fillers = {"new",    "hot",      "sale",     "free",     "shipping", "wholesale", "best",
               "quality", "factory", "price",    "cheap",    "top",      "custom",    "oem",
               "2024",    "brand",   "original", "genuine",  "discount", "fast",      "delivery",
               "for",     "with",    "and",      "pcs",      "set",      "lot"};
  return c;
}

std::vector<CategorySpec> GenConfig::active_categories() const {
  if (n_categories == 0 || n_categories >= categories.size()) return categories;
  return {categories.begin(), categories.begin() + static_cast<std::ptrdiff_t>(n_categories)};
}

void GenConfig::validate() const {
  const auto cats = active_categories();
  if (cats.empty()) throw ConfigError("generator: empty subject set");
  if (!(positive_fraction > 0.0 && positive_fraction < 1.0)) {
    throw ConfigError("generator: positive_fraction must lie in (0, 1)");
  }
  if (!(stuffing_rate >= 0.0 && stuffing_rate <= 20.0)) throw ConfigError("generator: stuffing_rate outside [0, 20]");
  if (!(query_unit_rate >= 0.0 && query_unit_rate <= 1.0)) {
    throw ConfigError("generator: query_unit_rate outside [0, 1]");
  }
  if (!(zipf >= 0.0)) throw ConfigError("generator: zipf must be nonnegative");
  if (n_pairs == 0 || n_queries == 0) throw ConfigError("generator: n_pairs and n_queries must be positive");
  if (fillers.empty()) throw ConfigError("generator: empty filler list");

  // word -> owning class label, to catch overlaps.
  std::map<std::string, std::string> owner;
  auto claim = [&](const std::string& word, const std::string& cls) {
    if (word.empty() || text::normalize(word) != word || word.find(' ') != std::string::npos) {
      throw ConfigError("generator: word '" + word + "' is not a single normalized word");
    }
    auto [it, fresh] = owner.emplace(word, cls);
    if (!fresh && it->second != cls) {
      throw ConfigError("generator: '" + word + "' appears in both " + it->second + " and " + cls);
    }
  };
  std::set<std::string> subjects;
  for (const auto& cat : cats) {
    if (!subjects.insert(cat.subject).second) throw ConfigError("generator: duplicate subject " + cat.subject);
    if (cat.core.empty()) throw ConfigError("generator: category " + cat.subject + " has no core keywords");
    if (cat.units.empty()) throw ConfigError("generator: category " + cat.subject + " has no units");
    claim(cat.subject, "subjects");
    for (const auto& w : cat.core) claim(w, "core keywords");
    for (const auto& w : cat.units) claim(w, "units");
  }
  bool has_attribute = false;
  for (const auto& [cls, words] : attributes) {
    if (cls < 1 || cls >= text::kNerTagCount || cls == static_cast<int32_t>(text::NerCategory::kCore) ||
        cls == static_cast<int32_t>(text::NerCategory::kSpecification)) {
      throw ConfigError("generator: attribute class " + std::to_string(cls) + " not in {1, 2, 3, 5}");
    }
    for (const auto& w : words) claim(w, std::string(text::category_name(static_cast<text::NerCategory>(cls))));
    has_attribute = has_attribute || !words.empty();
  }
  if (!has_attribute) throw ConfigError("generator: no attribute words");
  for (const auto& w : fillers) claim(w, "fillers");

  std::set<std::string> base;
  for (const auto& w : base_subwords(*this)) base.insert(w);
  for (const auto& cat : cats) {
    for (const auto& w : cat.core) {
      if (base.count(w)) throw ConfigError("generator: core keyword '" + w + "' is a base vocabulary token");
    }
  }
}

void to_json(nlohmann::json& j, const GenConfig& c) {
  nlohmann::json cats = nlohmann::json::array();
  for (const auto& cat : c.categories) cats.push_back({{"subject", cat.subject}, {"core", cat.core}, {"units", cat.units}});
  nlohmann::json attrs = nlohmann::json::object();
  for (const auto& [cls, words] : c.attributes) attrs[std::to_string(cls)] = words;
  j = {{"categories", cats},         {"attributes", attrs},
       {"fillers", c.fillers},       {"morphemes", c.morphemes},
       {"n_categories", c.n_categories}, {"n_pairs", c.n_pairs},
       {"n_queries", c.n_queries},   {"stuffing_rate", c.stuffing_rate},
       {"positive_fraction", c.positive_fraction}, {"query_unit_rate", c.query_unit_rate},
       {"zipf", c.zipf},             {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, GenConfig& c) {
  GenConfig d = GenConfig::defaults();
  c = d;
  if (auto it = j.find("categories"); it != j.end()) {
    c.categories.clear();
    for (const auto& cat : *it) {
      c.categories.push_back({cat.at("subject").get<std::string>(), cat.at("core").get<std::vector<std::string>>(),
                              cat.at("units").get<std::vector<std::string>>()});
    }
  }
  if (auto it = j.find("attributes"); it != j.end()) {
    c.attributes.clear();
    for (const auto& [key, words] : it->items()) {
      c.attributes[std::stoi(key)] = words.get<std::vector<std::string>>();
    }
  }
  c.fillers = j.value("fillers", d.fillers);
  c.morphemes = j.value("morphemes", d.morphemes);
  c.n_categories = j.value("n_categories", d.n_categories);
  c.n_pairs = j.value("n_pairs", d.n_pairs);
  c.n_queries = j.value("n_queries", d.n_queries);
  c.stuffing_rate = j.value("stuffing_rate", d.stuffing_rate);
  c.positive_fraction = j.value("positive_fraction", d.positive_fraction);
  c.query_unit_rate = j.value("query_unit_rate", d.query_unit_rate);
  c.zipf = j.value("zipf", d.zipf);
  c.seed = j.value("seed", d.seed);
}

RelevanceRule::RelevanceRule(const GenConfig& config) {
  for (const auto& cat : config.active_categories()) {
    subjects_.insert(cat.subject);
    core_.insert(cat.core.begin(), cat.core.end());
    units_.insert(cat.units.begin(), cat.units.end());
  }
}

int32_t RelevanceRule::label(std::string_view query, std::string_view title) const {
  const auto q = text::split_words(text::normalize(query));
  const auto t = text::split_words(text::normalize(title));
  auto first_of = [](const Words& words, const std::set<std::string>& set) -> const std::string* {
    for (const auto& w : words) {
      if (set.count(w)) return &w;
    }
    return nullptr;
  };
  const std::string* qs = first_of(q, subjects_);
  const std::string* ts = first_of(t, subjects_);
  if (!qs || !ts || *qs != *ts) return 0;
  const std::set<std::string> title_words(t.begin(), t.end());
  for (const auto& w : q) {
    if (core_.count(w) && !title_words.count(w)) return 0;
  }
  if (const std::string* qu = first_of(q, units_)) {
    const std::string* tu = first_of(t, units_);
    if (!tu || *tu != *qu) return 0;
  }
  return 1;
}

text::TermLexicon make_lexicon(const GenConfig& config) {
  text::TermLexicon lexicon;
  for (const auto& cat : config.active_categories()) {
    lexicon.add(cat.subject, text::NerCategory::kCore);
    for (const auto& w : cat.core) lexicon.add(w, text::NerCategory::kCore);
    for (const auto& w : cat.units) lexicon.add(w, text::NerCategory::kSpecification);
  }
  for (const auto& [cls, words] : config.attributes) {
    for (const auto& w : words) lexicon.add(w, cls);
  }
  return lexicon;
}

std::vector<std::string> base_subwords(const GenConfig& config) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  auto push = [&](const std::string& w) {
    if (seen.insert(w).second) out.push_back(w);
  };
  for (const auto& m : config.morphemes) push(m);
  for (const auto& cat : config.categories) push(cat.subject);
  for (const auto& [cls, words] : config.attributes) {
    for (const auto& w : words) push(w);
  }
  for (const auto& w : config.fillers) push(w);
  return out;
}

text::Vocabulary default_base_vocab() {
  const auto subwords = base_subwords(GenConfig::defaults());
  return text::make_base_vocab(subwords);
}

Corpus generate_corpus(const GenConfig& config) {
  config.validate();
  Generator gen(config);
  RelevanceRule rule(config);
  const auto queries = gen.make_queries();
  auto& rng = gen.rng();

  // Popularity ranks are a random permutation of the query pool.
  std::vector<std::size_t> by_rank(queries.size());
  for (std::size_t i = 0; i < by_rank.size(); ++i) by_rank[i] = i;
  shuffle(by_rank, rng);
  const Zipf zipf(queries.size(), config.zipf);

  const auto n_pos = static_cast<std::size_t>(std::llround(config.positive_fraction * static_cast<double>(config.n_pairs)));
  std::vector<int32_t> targets(config.n_pairs, 0);
  std::fill(targets.begin(), targets.begin() + static_cast<std::ptrdiff_t>(n_pos), 1);
  shuffle(targets, rng);

  Corpus corpus;
  corpus.rule = rule;
  corpus.lexicon = make_lexicon(config);
  corpus.pairs.reserve(config.n_pairs);
  constexpr int kMaxAttempts = 200;
  for (const int32_t target : targets) {
    const Query& q = queries[by_rank[zipf(rng)]];
    bool done = false;
    for (int attempt = 0; attempt < kMaxAttempts && !done; ++attempt) {
      const std::string title = join(target ? gen.positive(q) : gen.negative(q));
      if (rule.label(q.text, title) != target) continue;
      LabeledPair pair{q.text, title, target, std::nullopt};
      if (target == 1) pair.click_level = draw_click(rng);
      corpus.pairs.push_back(std::move(pair));
      done = true;
    }
    if (!done) throw ConfigError("generator: cannot realize a label-" + std::to_string(target) + " title for '" + q.text + "'");
  }
  std::vector<std::string> all_texts;
  all_texts.reserve(2 * corpus.pairs.size());
  for (const auto& p : corpus.pairs) {
    all_texts.push_back(p.query);
    all_texts.push_back(p.title);
  }
  corpus.word_counts = text::count_words(all_texts);
  return corpus;
}

}  // namespace srel::data
