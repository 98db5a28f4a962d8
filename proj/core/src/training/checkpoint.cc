// Copyright 2026 The TwinTower Authors
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

#include "twintower/training/checkpoint.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "twintower/error.h"

namespace twintower::training {
namespace {

void AppendDoubles(std::string& out, std::span<const double> values) {
  for (double v : values) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
    }
  }
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  void ReadDoubles(std::span<double> out) {
    if (bytes_.size() - pos_ < out.size() * 8) {
      throw InputError("checkpoint payload is truncated");
    }
    for (double& v : out) {
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) {
        bits |= static_cast<std::uint64_t>(
                    static_cast<unsigned char>(bytes_[pos_ + b]))
                << (8 * b);
      }
      v = std::bit_cast<double>(bits);
      pos_ += 8;
    }
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string SerializeCheckpoint(const model::TwoTowerModel& model,
                                const AdamState& adam,
                                const CheckpointMeta& meta) {
  const auto& entries = model.parameters().entries();
  if (adam.m.size() != entries.size() || adam.v.size() != entries.size()) {
    throw Error("optimizer state does not match the parameter set");
  }
  nlohmann::json tensors = nlohmann::json::array();
  for (const auto& e : entries) {
    tensors.push_back({{"name", e.name}, {"shape", e.tensor.shape()}});
  }
  nlohmann::json header{{"model", model.config()},
                        {"dims", model.dims()},
                        {"schema_hash", meta.schema_hash},
                        {"id_items", meta.id_items},
                        {"train", meta.train},
                        {"epoch_loss", meta.epoch_loss},
                        {"run", meta.run},
                        {"adam_step", adam.step},
                        {"tensors", tensors}};
  std::string out(kCheckpointMagic);
  out += '\n';
  out += header.dump();
  out += '\n';
  for (const auto& e : entries) AppendDoubles(out, e.tensor.values());
  for (const auto& m : adam.m) AppendDoubles(out, m);
  for (const auto& v : adam.v) AppendDoubles(out, v);
  return out;
}

namespace {

Checkpoint ParseUnchecked(std::string_view bytes) {
  std::string magic_line = std::string(kCheckpointMagic) + "\n";
  if (!bytes.starts_with(magic_line)) {
    throw InputError("not a checkpoint: missing TTWR1 magic");
  }
  bytes.remove_prefix(magic_line.size());
  std::size_t eol = bytes.find('\n');
  if (eol == std::string_view::npos) {
    throw InputError("checkpoint header is not terminated");
  }
  nlohmann::json header;
  model::ModelConfig config;
  model::ModelDims dims;
  CheckpointMeta meta;
  std::uint64_t step = 0;
  try {
    header = nlohmann::json::parse(bytes.substr(0, eol));
    config = header.at("model").get<model::ModelConfig>();
    dims = header.at("dims").get<model::ModelDims>();
    meta.schema_hash = header.at("schema_hash").get<std::string>();
    meta.id_items = header.at("id_items").get<std::vector<std::string>>();
    meta.train = header.at("train").get<TrainConfig>();
    meta.epoch_loss = header.at("epoch_loss").get<std::vector<double>>();
    meta.run = header.at("run");
    step = header.at("adam_step").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed checkpoint header: ") + e.what());
  }
  bytes.remove_prefix(eol + 1);

  model::TwoTowerModel model(config, dims, /*seed=*/0);
  const auto& entries = model.parameters().entries();
  const auto& listed = header.at("tensors");
  if (listed.size() != entries.size()) {
    throw InputError("checkpoint lists " + std::to_string(listed.size()) +
                     " tensors, model expects " +
                     std::to_string(entries.size()));
  }
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (listed[k].at("name").get<std::string>() != entries[k].name ||
        listed[k].at("shape").get<numerics::Shape>() !=
            entries[k].tensor.shape()) {
      throw InputError("checkpoint tensor " + std::to_string(k) +
                       " does not match parameter '" + entries[k].name + "'");
    }
  }
  Reader reader(bytes);
  for (const auto& e : entries) {
    numerics::Tensor t = e.tensor;
    reader.ReadDoubles(t.mutable_values());
  }
  AdamState adam = AdamState::For(model.parameters());
  adam.step = step;
  for (auto& m : adam.m) reader.ReadDoubles(m);
  for (auto& v : adam.v) reader.ReadDoubles(v);
  if (!reader.done()) throw InputError("checkpoint has trailing bytes");
  return Checkpoint{std::move(model), std::move(adam), std::move(meta)};
}

}  // namespace

Checkpoint ParseCheckpoint(std::string_view bytes) {
  try {
    return ParseUnchecked(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed checkpoint header: ") + e.what());
  }
}

void SaveCheckpoint(const std::filesystem::path& path,
                    const model::TwoTowerModel& model, const AdamState& adam,
                    const CheckpointMeta& meta) {
  std::string bytes = SerializeCheckpoint(model, adam, meta);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("short write to " + path.string());
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open checkpoint " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseCheckpoint(buffer.str());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void RequireSchemaMatch(const CheckpointMeta& meta,
                        const std::string& corpus_hash) {
  if (meta.schema_hash != corpus_hash) {
    throw InputError("schema hash mismatch: checkpoint " + meta.schema_hash +
                     ", dataset " + corpus_hash);
  }
}

}  // namespace twintower::training
