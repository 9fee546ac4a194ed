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

#ifndef SREL_DATA_PAIRS_H_
#define SREL_DATA_PAIRS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace srel::data {

// Ordered by user intent, weakest first.
enum class ClickLevel : int32_t {
  kPageClick = 0,
  kAddToCart = 1,
  kContactSupplier = 2,
  kOrder = 3,
  kPay = 4,
};

std::string_view click_level_name(ClickLevel level);
// Throws InputError for unknown names.
ClickLevel parse_click_level(std::string_view name);
// Copies per pair at each level: 1, 1, 2, 3, 5.
std::size_t click_weight(ClickLevel level);

struct LabeledPair {
  std::string query;
  std::string title;
  std::optional<int32_t> label;
  std::optional<ClickLevel> click_level;

  bool operator==(const LabeledPair&) const = default;
};

// Repeats every pair according to its click weight, keeping order. Pairs
// without a level count as page clicks.
std::vector<LabeledPair> resample_by_click(std::span<const LabeledPair> pairs);

enum class PairFormat { kTsv, kJsonl };

// ".jsonl" and ".json" map to JSON lines, everything else to TSV.
PairFormat format_for(const std::filesystem::path& path);

// TSV: query<TAB>title<TAB>label[<TAB>click_level]; an empty or missing label
// column leaves the pair unlabeled. JSON lines use the same keys. Blank lines
// are skipped. Errors carry the 1-based line number, invalid UTF-8 the byte
// offset into the file.
std::vector<LabeledPair> parse_pairs(std::string_view content, PairFormat format);
std::string format_pairs(std::span<const LabeledPair> pairs, PairFormat format);
std::vector<LabeledPair> load_pairs(const std::filesystem::path& path, PairFormat format);
std::vector<LabeledPair> load_pairs(const std::filesystem::path& path);
void save_pairs(std::span<const LabeledPair> pairs, const std::filesystem::path& path, PairFormat format);
void save_pairs(std::span<const LabeledPair> pairs, const std::filesystem::path& path);

std::vector<std::pair<std::string, std::string>> texts(std::span<const LabeledPair> pairs);
// Throws InputError naming the first unlabeled row.
std::vector<int> labels(std::span<const LabeledPair> pairs);

using QueryCount = std::pair<std::string, uint64_t>;

// Normalized queries by descending count, ties lexicographic.
std::vector<QueryCount> query_frequency(std::span<const LabeledPair> pairs);
std::vector<QueryCount> query_frequency(std::span<const std::string> queries);
// ceil(fraction * size) leading entries; fraction in [0, 1].
std::vector<QueryCount> top_fraction(std::span<const QueryCount> ranked, double fraction);

// query<TAB>count lines.
void save_frequency(std::span<const QueryCount> ranked, const std::filesystem::path& path);
std::vector<QueryCount> load_frequency(const std::filesystem::path& path);

}  // namespace srel::data

#endif  // SREL_DATA_PAIRS_H_
