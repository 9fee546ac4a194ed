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

#include "srel/data/pairs.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "srel/common/errors.h"
#include "srel/common/utf8.h"
#include "srel/text/normalize.h"

namespace srel::data {

namespace {

constexpr std::string_view kLevelNames[] = {"page-click", "add-to-cart", "contact-supplier", "order", "pay"};
constexpr std::size_t kLevelWeights[] = {1, 1, 2, 3, 5};

std::string line_error(std::size_t line_no, const std::string& what) {
  return "pairs: line " + std::to_string(line_no) + ": " + what;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

int32_t parse_label(std::string_view field, std::size_t line_no) {
  if (field == "0") return 0;
  if (field == "1") return 1;
  throw InputError(line_error(line_no, "label must be 0 or 1, got '" + std::string(field) + "'"));
}

void check_text(const std::string& text, std::string_view what, std::size_t line_no) {
  if (text::normalize(text).empty()) throw InputError(line_error(line_no, std::string(what) + " is empty"));
}

LabeledPair parse_tsv_line(std::string_view line, std::size_t line_no) {
  auto fields = split_tabs(line);
  if (fields.size() < 2 || fields.size() > 4) {
    throw InputError(line_error(line_no, "expected 2 to 4 tab-separated columns, got " +
                                             std::to_string(fields.size())));
  }
  LabeledPair pair{std::string(fields[0]), std::string(fields[1]), std::nullopt, std::nullopt};
  if (fields.size() >= 3 && !fields[2].empty()) pair.label = parse_label(fields[2], line_no);
  if (fields.size() == 4 && !fields[3].empty()) {
    try {
      pair.click_level = parse_click_level(fields[3]);
    } catch (const InputError& e) {
      throw InputError(line_error(line_no, e.what()));
    }
  }
  return pair;
}

LabeledPair parse_json_line(std::string_view line, std::size_t line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(line_error(line_no, e.what()));
  }
  try {
    if (!j.is_object()) throw InputError("not an object");
    LabeledPair pair;
    pair.query = j.at("query").get<std::string>();
    pair.title = j.at("title").get<std::string>();
    if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
      if (!it->is_number_integer()) throw InputError("label must be an integer");
      const auto v = it->get<int64_t>();
      if (v != 0 && v != 1) throw InputError("label must be 0 or 1");
      pair.label = static_cast<int32_t>(v);
    }
    if (auto it = j.find("click_level"); it != j.end() && !it->is_null()) {
      pair.click_level = parse_click_level(it->get<std::string>());
    }
    return pair;
  } catch (const InputError& e) {
    throw InputError(line_error(line_no, e.what()));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(line_error(line_no, e.what()));
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("pairs: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("pairs: cannot write " + path.string());
  out << content;
  if (!out) throw InputError("pairs: write failed for " + path.string());
}

}  // namespace

std::string_view click_level_name(ClickLevel level) {
  const auto i = static_cast<std::size_t>(level);
  if (i >= std::size(kLevelNames)) throw InputError("unknown click level " + std::to_string(i));
  return kLevelNames[i];
}

ClickLevel parse_click_level(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kLevelNames); ++i) {
    if (kLevelNames[i] == name) return static_cast<ClickLevel>(i);
  }
  throw InputError("unknown click level '" + std::string(name) + "'");
}

std::size_t click_weight(ClickLevel level) {
  const auto i = static_cast<std::size_t>(level);
  if (i >= std::size(kLevelWeights)) throw InputError("unknown click level " + std::to_string(i));
  return kLevelWeights[i];
}

std::vector<LabeledPair> resample_by_click(std::span<const LabeledPair> pairs) {
  std::vector<LabeledPair> out;
  for (const auto& pair : pairs) {
    const std::size_t copies = click_weight(pair.click_level.value_or(ClickLevel::kPageClick));
    for (std::size_t c = 0; c < copies; ++c) out.push_back(pair);
  }
  return out;
}

PairFormat format_for(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".jsonl" || ext == ".json") ? PairFormat::kJsonl : PairFormat::kTsv;
}

std::vector<LabeledPair> parse_pairs(std::string_view content, PairFormat format) {
  if (auto bad = find_invalid_utf8(content)) {
    throw InputError("pairs: invalid UTF-8 at byte offset " + std::to_string(*bad));
  }
  std::vector<LabeledPair> pairs;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    LabeledPair pair = format == PairFormat::kTsv ? parse_tsv_line(line, line_no) : parse_json_line(line, line_no);
    check_text(pair.query, "query", line_no);
    check_text(pair.title, "title", line_no);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::string format_pairs(std::span<const LabeledPair> pairs, PairFormat format) {
  std::string out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    if (format == PairFormat::kTsv) {
      for (const auto* field : {&p.query, &p.title}) {
        if (field->find_first_of("\t\n\r") != std::string::npos) {
          throw InputError("pairs: row " + std::to_string(i + 1) + " contains a tab or newline");
        }
      }
      out += p.query;
      out += '\t';
      out += p.title;
      out += '\t';
      if (p.label) out += std::to_string(*p.label);
      if (p.click_level) {
        out += '\t';
        out += click_level_name(*p.click_level);
      }
    } else {
      nlohmann::ordered_json j;
      j["query"] = p.query;
      j["title"] = p.title;
      if (p.label) j["label"] = *p.label;
      if (p.click_level) j["click_level"] = std::string(click_level_name(*p.click_level));
      out += j.dump();
    }
    out += '\n';
  }
  return out;
}

std::vector<LabeledPair> load_pairs(const std::filesystem::path& path, PairFormat format) {
  try {
    return parse_pairs(read_file(path), format);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::vector<LabeledPair> load_pairs(const std::filesystem::path& path) { return load_pairs(path, format_for(path)); }

void save_pairs(std::span<const LabeledPair> pairs, const std::filesystem::path& path, PairFormat format) {
  write_file(path, format_pairs(pairs, format));
}

void save_pairs(std::span<const LabeledPair> pairs, const std::filesystem::path& path) {
  save_pairs(pairs, path, format_for(path));
}

std::vector<std::pair<std::string, std::string>> texts(std::span<const LabeledPair> pairs) {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.emplace_back(p.query, p.title);
  return out;
}

std::vector<int> labels(std::span<const LabeledPair> pairs) {
  std::vector<int> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!pairs[i].label) throw InputError("pairs: row " + std::to_string(i + 1) + " is unlabeled");
    out.push_back(*pairs[i].label);
  }
  return out;
}

std::vector<QueryCount> query_frequency(std::span<const std::string> queries) {
  std::map<std::string, uint64_t> counts;
  for (const auto& q : queries) {
    auto key = text::normalize(q);
    if (!key.empty()) ++counts[key];
  }
  std::vector<QueryCount> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const QueryCount& a, const QueryCount& b) { return a.second > b.second; });
  return ranked;
}

std::vector<QueryCount> query_frequency(std::span<const LabeledPair> pairs) {
  std::vector<std::string> queries;
  queries.reserve(pairs.size());
  for (const auto& p : pairs) queries.push_back(p.query);
  return query_frequency(queries);
}

std::vector<QueryCount> top_fraction(std::span<const QueryCount> ranked, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ParameterError("top_fraction: fraction outside [0, 1]");
  auto keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(ranked.size()) - 1e-9));
  keep = std::min(keep, ranked.size());
  return {ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep)};
}

void save_frequency(std::span<const QueryCount> ranked, const std::filesystem::path& path) {
  std::string out;
  for (const auto& [query, count] : ranked) out += query + "\t" + std::to_string(count) + "\n";
  write_file(path, out);
}

std::vector<QueryCount> load_frequency(const std::filesystem::path& path) {
  const auto content = read_file(path);
  std::vector<QueryCount> ranked;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos || tab == 0) {
      throw InputError(path.string() + ": line " + std::to_string(line_no) + ": expected query<TAB>count");
    }
    uint64_t count = 0;
    try {
      std::size_t used = 0;
      count = std::stoull(line.substr(tab + 1), &used);
      if (used != line.size() - tab - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InputError(path.string() + ": line " + std::to_string(line_no) + ": bad count");
    }
    ranked.emplace_back(line.substr(0, tab), count);
  }
  return ranked;
}

}  // namespace srel::data
