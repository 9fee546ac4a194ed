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

#ifndef SREL_TRAIN_AUGMENT_H_
#define SREL_TRAIN_AUGMENT_H_

#include <span>
#include <utility>
#include <vector>

#include "srel/batching/batch.h"
#include "srel/core/rng.h"
#include "srel/text/wordpiece.h"

namespace srel::train {

// Piecewise-constant geometric decay from tau_max to tau_min over `phases`
// equal spans of the run; the final step always uses tau_min.
struct TemperatureSchedule {
  double tau_max = 4.0;
  double tau_min = 1.0;
  std::size_t phases = 3;
};

double temperature(std::size_t step, std::size_t total_steps, const TemperatureSchedule& schedule);

// Drops each untagged word (NER 0) with probability `rate`; tagged words stay.
// A side that would lose every word keeps one of its words at random.
text::TokenizedText word_drop(const text::TokenizedText& t, double rate, core::Rng& rng);
std::pair<text::TokenizedText, text::TokenizedText> word_drop(const text::TokenizedText& query,
                                                              const text::TokenizedText& item, double rate,
                                                              core::Rng& rng);

// Appends one label-0 pair per query using another item of the batch. A
// negative whose item equals the positive's is redrawn up to n times, then
// skipped. Batches of one come back unchanged.
std::vector<batching::TokenizedPair> in_batch_negatives(std::span<const batching::TokenizedPair> positives,
                                                        core::Rng& rng);

}  // namespace srel::train

#endif  // SREL_TRAIN_AUGMENT_H_
