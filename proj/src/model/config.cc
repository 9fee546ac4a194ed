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

#include "srel/model/config.h"

#include <string>

#include "srel/common/errors.h"

namespace srel::model {

void ModelConfig::validate() const {
  if (layers == 0 || hidden == 0 || heads == 0 || head_dim == 0 || ffn == 0) {
    throw ConfigError("model config: layers, hidden, heads, head_dim and ffn must be positive");
  }
  if (hidden != heads * head_dim) {
    throw ConfigError("model config: hidden " + std::to_string(hidden) + " != heads " + std::to_string(heads) +
                      " * head_dim " + std::to_string(head_dim));
  }
  if (vocab_size < 5) throw ConfigError("model config: vocab_size must cover the special tokens");
  if (max_positions == 0 || ner_tags == 0 || segments == 0) {
    throw ConfigError("model config: max_positions, ner_tags and segments must be positive");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("model config: dropout must lie in [0, 1)");
  if (!(temperature > 0.0)) throw ConfigError("model config: temperature must be positive");
  if (!(init_std >= 0.0)) throw ConfigError("model config: init_std must be non-negative");
}

void ModelConfig::require_layout(std::size_t query_limit, std::size_t item_limit) const {
  if (max_positions < query_limit + item_limit + 3) {
    throw ConfigError("model config: max_positions " + std::to_string(max_positions) + " < " +
                      std::to_string(query_limit) + " + " + std::to_string(item_limit) + " + 3");
  }
}

void to_json(nlohmann::json& j, const ModelConfig& c) {
  j = nlohmann::json{{"layers", c.layers},
                     {"hidden", c.hidden},
                     {"heads", c.heads},
                     {"head_dim", c.head_dim},
                     {"ffn", c.ffn},
                     {"vocab_size", c.vocab_size},
                     {"max_positions", c.max_positions},
                     {"ner_tags", c.ner_tags},
                     {"segments", c.segments},
                     {"dropout", c.dropout},
                     {"temperature", c.temperature},
                     {"init_std", c.init_std}};
}

void from_json(const nlohmann::json& j, ModelConfig& c) {
  ModelConfig d;
  c.layers = j.value("layers", d.layers);
  c.hidden = j.value("hidden", d.hidden);
  c.heads = j.value("heads", d.heads);
  c.head_dim = j.value("head_dim", c.hidden / (c.heads ? c.heads : 1));
  c.ffn = j.value("ffn", d.ffn);
  c.vocab_size = j.value("vocab_size", d.vocab_size);
  c.max_positions = j.value("max_positions", d.max_positions);
  c.ner_tags = j.value("ner_tags", d.ner_tags);
  c.segments = j.value("segments", d.segments);
  c.dropout = j.value("dropout", d.dropout);
  c.temperature = j.value("temperature", d.temperature);
  c.init_std = j.value("init_std", d.init_std);
}

ComplexityEstimate complexity_estimate(const ModelConfig& config, std::size_t n, std::size_t l) {
  const double L = static_cast<double>(config.layers);
  const double nn = static_cast<double>(n), ll = static_cast<double>(l);
  const double d = static_cast<double>(config.hidden), m = static_cast<double>(config.heads);
  const double a = static_cast<double>(config.head_dim), k = static_cast<double>(config.ffn);
  ComplexityEstimate e;
  // c_mha * m = 4
  e.mha_flops = 4.0 * L * nn * ll * ll * d;
  e.ffn_flops = L * (4.0 * a) * nn * ll * k * m;
  return e;
}

}  // namespace srel::model
