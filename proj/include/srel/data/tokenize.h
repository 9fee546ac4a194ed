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

#ifndef SREL_DATA_TOKENIZE_H_
#define SREL_DATA_TOKENIZE_H_

#include <span>
#include <vector>

#include "srel/batching/batch.h"
#include "srel/data/pairs.h"
#include "srel/text/wordpiece.h"

namespace srel::data {

// Tokenizes and tags both sides. Unlabeled pairs get label 0, so callers that
// need labels should check them first.
std::vector<batching::TokenizedPair> tokenize_pairs(std::span<const LabeledPair> pairs,
                                                    const text::Tokenizer& tokenizer);

}  // namespace srel::data

#endif  // SREL_DATA_TOKENIZE_H_
