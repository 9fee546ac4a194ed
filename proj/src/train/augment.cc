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

#include "srel/train/augment.h"

#include <cmath>

#include "srel/common/errors.h"
#include "srel/common/log.h"

namespace srel::train {

double temperature(std::size_t step, std::size_t total_steps, const TemperatureSchedule& s) {
  if (!(s.tau_min > 0) || s.tau_max < s.tau_min) {
    throw ParameterError("temperature: need tau_max >= tau_min > 0");
  }
  if (s.phases <= 1 || total_steps <= 1 || step + 1 >= total_steps) return s.tau_min;
  const std::size_t phase = std::min(s.phases - 1, step * s.phases / total_steps);
  if (phase == 0) return s.tau_max;
  if (phase == s.phases - 1) return s.tau_min;
  const double frac = static_cast<double>(phase) / static_cast<double>(s.phases - 1);
  return s.tau_max * std::pow(s.tau_min / s.tau_max, frac);
}

text::TokenizedText word_drop(const text::TokenizedText& t, double rate, core::Rng& rng) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw ParameterError("word_drop: rate must lie in [0, 1]");
  if (rate == 0.0 || t.words.empty()) return t;
  std::vector<int32_t> tag(t.words.size(), 0);
  for (std::size_t i = t.size(); i-- > 0;) tag[t.word_index[i]] = t.ner[i];
  std::vector<std::size_t> keep;
  for (std::size_t w = 0; w < t.words.size(); ++w) {
    if (tag[w] != 0 || rng.uniform() >= rate) keep.push_back(w);
  }
  if (keep.empty()) keep.push_back(rng.below(t.words.size()));
  return text::select_words(t, keep);
}

std::pair<text::TokenizedText, text::TokenizedText> word_drop(const text::TokenizedText& query,
                                                              const text::TokenizedText& item, double rate,
                                                              core::Rng& rng) {
  text::TokenizedText q = word_drop(query, rate, rng);
  text::TokenizedText i = word_drop(item, rate, rng);
  return {std::move(q), std::move(i)};
}

std::vector<batching::TokenizedPair> in_batch_negatives(std::span<const batching::TokenizedPair> positives,
                                                        core::Rng& rng) {
  std::vector<batching::TokenizedPair> out(positives.begin(), positives.end());
  const std::size_t n = positives.size();
  if (n < 2) {
    SREL_LOG_WARNING << "in_batch_negatives: batch of " << n << " has no other items";
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t attempt = 0; attempt < n; ++attempt) {
      std::size_t j = rng.below(n - 1);
      if (j >= i) ++j;
      if (positives[j].item.words == positives[i].item.words) continue;
      out.push_back({positives[i].query, positives[j].item, 0});
      break;
    }
  }
  return out;
}

}  // namespace srel::train
