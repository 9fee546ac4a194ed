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

#include "srel/text/vocabulary.h"

#include <fstream>

#include "srel/common/errors.h"
#include "srel/common/hash.h"

namespace srel::text {

Vocabulary::Vocabulary()
    : Vocabulary(FromTokens{}, {std::string(kPadToken), std::string(kUnkToken), std::string(kClsToken),
                                std::string(kSepToken), std::string(kMaskToken)}) {}

Vocabulary::Vocabulary(FromTokens, std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty() || tokens_[0] != kPadToken) {
    throw ConfigError("vocabulary: [PAD] must be the first token (id 0)");
  }
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) throw ConfigError("vocabulary: empty token at id " + std::to_string(i));
    if (!index_.emplace(tokens_[i], static_cast<int32_t>(i)).second) {
      throw ConfigError("vocabulary: duplicate token '" + tokens_[i] + "' at id " + std::to_string(i));
    }
  }
  auto require = [&](std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw ConfigError("vocabulary: missing special token " + std::string(name));
    return it->second;
  };
  unk_id_ = require(kUnkToken);
  cls_id_ = require(kClsToken);
  sep_id_ = require(kSepToken);
  mask_id_ = require(kMaskToken);
  base_size_ = tokens_.size();
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  return Vocabulary(FromTokens{}, std::move(tokens));
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("vocabulary: cannot open " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  return from_tokens(std::move(tokens));
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("vocabulary: cannot write " + path.string());
  for (const std::string& t : tokens_) out << t << '\n';
}

Vocabulary Vocabulary::extend(std::span<const std::string> words) const {
  Vocabulary out = *this;
  for (const std::string& w : words) {
    if (w.empty() || out.index_.contains(w)) continue;
    out.index_.emplace(w, static_cast<int32_t>(out.tokens_.size()));
    out.tokens_.push_back(w);
  }
  return out;
}

std::optional<int32_t> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::token(int32_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw BoundsError("vocabulary: id " + std::to_string(id) + " out of range");
  }
  return tokens_[id];
}

bool Vocabulary::is_special(int32_t id) const {
  return id == 0 || id == unk_id_ || id == cls_id_ || id == sep_id_ || id == mask_id_;
}

uint64_t Vocabulary::fingerprint() const {
  uint64_t h = kFnvOffset;
  for (const std::string& t : tokens_) {
    h = fnv1a(t, h);
    h = fnv1a("\n", h);
  }
  return h;
}

}  // namespace srel::text
