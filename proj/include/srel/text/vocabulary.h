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

#ifndef SREL_TEXT_VOCABULARY_H_
#define SREL_TEXT_VOCABULARY_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace srel::text {

inline constexpr std::string_view kPadToken = "[PAD]";
inline constexpr std::string_view kUnkToken = "[UNK]";
inline constexpr std::string_view kClsToken = "[CLS]";
inline constexpr std::string_view kSepToken = "[SEP]";
inline constexpr std::string_view kMaskToken = "[MASK]";
inline constexpr std::string_view kContinuationPrefix = "##";

// Subword inventory. Ids are dense in [0, size()); [PAD] is always id 0 so that
// padding columns are literally zero columns. Tokens added with extend() form the
// extension set and are never duplicates of base entries.
class Vocabulary {
 public:
  // Specials only: [PAD]=0, [UNK]=1, [CLS]=2, [SEP]=3, [MASK]=4.
  Vocabulary();

  // Line number = id. Requires [PAD] first and all other specials present.
  static Vocabulary from_tokens(std::vector<std::string> tokens);
  static Vocabulary load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  // Returns a copy with `words` appended as whole-word tokens (the extension set).
  Vocabulary extend(std::span<const std::string> words) const;

  std::optional<int32_t> find(std::string_view token) const;
  bool contains(std::string_view token) const { return find(token).has_value(); }
  const std::string& token(int32_t id) const;

  std::size_t size() const { return tokens_.size(); }
  std::size_t base_size() const { return base_size_; }
  std::span<const std::string> tokens() const { return tokens_; }
  std::span<const std::string> extension() const {
    return std::span<const std::string>(tokens_).subspan(base_size_);
  }

  int32_t pad_id() const { return 0; }
  int32_t unk_id() const { return unk_id_; }
  int32_t cls_id() const { return cls_id_; }
  int32_t sep_id() const { return sep_id_; }
  int32_t mask_id() const { return mask_id_; }
  bool is_special(int32_t id) const;

  // Content hash of the ordered token list; checkpoints record it.
  uint64_t fingerprint() const;

 private:
  struct FromTokens {};
  Vocabulary(FromTokens, std::vector<std::string> tokens);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int32_t> index_;
  std::size_t base_size_ = 0;
  int32_t unk_id_ = 1, cls_id_ = 2, sep_id_ = 3, mask_id_ = 4;
};

}  // namespace srel::text

#endif  // SREL_TEXT_VOCABULARY_H_
