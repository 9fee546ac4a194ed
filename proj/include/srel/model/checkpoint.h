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

#ifndef SREL_MODEL_CHECKPOINT_H_
#define SREL_MODEL_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "srel/model/encoder.h"

namespace srel::model {

// File layout: "SRELCKPT", uint64 header length, JSON header, raw little-endian
// doubles in header tensor-table order.
struct Checkpoint {
  EncoderParams params;
  uint64_t vocab_fingerprint = 0;
  nlohmann::json metadata = nlohmann::json::object();
  std::string id;  // hex FNV-1a of the file bytes; set by load/save
};

void save_checkpoint(const std::filesystem::path& path, Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace srel::model

#endif  // SREL_MODEL_CHECKPOINT_H_
