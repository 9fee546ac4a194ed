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

#ifndef SREL_COMMON_UTF8_H_
#define SREL_COMMON_UTF8_H_

#include <cstddef>
#include <optional>
#include <string_view>

namespace srel {

// Byte offset of the first invalid UTF-8 sequence, or nullopt if the input is valid.
std::optional<std::size_t> find_invalid_utf8(std::string_view text);

// Length in bytes of the code point starting at text[pos] (1 for stray bytes).
std::size_t utf8_sequence_length(std::string_view text, std::size_t pos);

std::size_t utf8_length(std::string_view text);

}  // namespace srel

#endif  // SREL_COMMON_UTF8_H_
