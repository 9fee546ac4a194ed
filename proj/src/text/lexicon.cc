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

#include "srel/text/lexicon.h"

#include <fstream>

#include "srel/common/errors.h"
#include "srel/text/normalize.h"

namespace srel::text {

std::string_view category_name(NerCategory category) {
  switch (category) {
    case NerCategory::kNone:
      return "none";
    case NerCategory::kMaterial:
      return "material";
    case NerCategory::kFunction:
      return "function";
    case NerCategory::kUsage:
      return "usage";
    case NerCategory::kSpecification:
      return "specification";
    case NerCategory::kStyle:
      return "style";
    case NerCategory::kCore:
      return "core";
  }
  return "unknown";
}

void TermLexicon::add(std::string_view word, int32_t category) {
  if (category < 1 || category >= kNerTagCount) {
    throw ParameterError("lexicon: category " + std::to_string(category) + " outside [1, 6]");
  }
  std::string key = normalize(word);
  if (key.empty()) throw ParameterError("lexicon: empty word");
  entries_[key] = static_cast<NerCategory>(category);
}

void TermLexicon::add(std::string_view word, NerCategory category) { add(word, static_cast<int32_t>(category)); }

NerCategory TermLexicon::lookup(std::string_view word) const {
  auto it = entries_.find(normalize(word));
  return it == entries_.end() ? NerCategory::kNone : it->second;
}

TermLexicon TermLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("lexicon: cannot open " + path.string());
  TermLexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw InputError("lexicon: line " + std::to_string(line_no) + " has no tab separator");
    }
    int32_t category = 0;
    try {
      category = std::stoi(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw InputError("lexicon: line " + std::to_string(line_no) + " has a non-integer category");
    }
    try {
      lexicon.add(line.substr(0, tab), category);
    } catch (const ParameterError& e) {
      throw InputError("lexicon: line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return lexicon;
}

void TermLexicon::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("lexicon: cannot write " + path.string());
  for (const auto& [word, category] : entries_) out << word << '\t' << static_cast<int32_t>(category) << '\n';
}

}  // namespace srel::text
