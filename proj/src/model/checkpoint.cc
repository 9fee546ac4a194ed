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

#include "srel/model/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "srel/common/errors.h"
#include "srel/common/hash.h"

namespace srel::model {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoints assume a little-endian host");

constexpr char kMagic[8] = {'S', 'R', 'E', 'L', 'C', 'K', 'P', 'T'};

}  // namespace

void save_checkpoint(const std::filesystem::path& path, Checkpoint& checkpoint) {
  nlohmann::json header;
  header["format"] = 1;
  header["config"] = checkpoint.params.config;
  header["vocab_fingerprint"] = hex64(checkpoint.vocab_fingerprint);
  header["metadata"] = checkpoint.metadata;
  nlohmann::json table = nlohmann::json::array();
  for (const Parameter* p : checkpoint.params.all()) {
    table.push_back({{"name", p->name}, {"shape", p->value.shape()}});
  }
  header["tensors"] = table;

  std::string bytes(kMagic, sizeof(kMagic));
  const std::string text = header.dump();
  const uint64_t length = text.size();
  bytes.append(reinterpret_cast<const char*>(&length), sizeof(length));
  bytes += text;
  for (const Parameter* p : checkpoint.params.all()) {
    bytes.append(reinterpret_cast<const char*>(p->value.data()), p->value.size() * sizeof(double));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("checkpoint: cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("checkpoint: write failed for " + path.string());
  checkpoint.id = hex64(fnv1a(bytes));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("checkpoint: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = buffer.str();
  const std::string where = "checkpoint " + path.string() + ": ";
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw InputError(where + "bad magic");
  }
  uint64_t length = 0;
  std::memcpy(&length, bytes.data() + 8, sizeof(length));
  if (length > bytes.size() - 16) throw InputError(where + "truncated header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(16, length));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(where + "bad header: " + e.what());
  }

  Checkpoint ck;
  ModelConfig config = header.at("config").get<ModelConfig>();
  ck.params = init_params(config, 0);
  ck.vocab_fingerprint = std::stoull(header.at("vocab_fingerprint").get<std::string>(), nullptr, 16);
  ck.metadata = header.value("metadata", nlohmann::json::object());
  const auto& table = header.at("tensors");
  std::vector<Parameter*> params = ck.params.all();
  if (table.size() != params.size()) throw InputError(where + "tensor count mismatch");
  std::size_t offset = 16 + length;
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i];
    if (table[i].at("name").get<std::string>() != p.name ||
        table[i].at("shape").get<core::Shape>() != p.value.shape()) {
      throw InputError(where + "tensor table entry " + std::to_string(i) + " does not match the config");
    }
    const std::size_t nbytes = p.value.size() * sizeof(double);
    if (offset + nbytes > bytes.size()) throw InputError(where + "truncated tensor data");
    std::memcpy(p.value.data(), bytes.data() + offset, nbytes);
    offset += nbytes;
  }
  if (offset != bytes.size()) throw InputError(where + "trailing bytes");
  ck.id = hex64(fnv1a(bytes));
  return ck;
}

}  // namespace srel::model
