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

// Checkpoint container:
//
//   "TTWR1\n"
//   one line of JSON: configs, schema hash, tensor names and shapes
//   "\n"
//   raw little-endian f64 data: every parameter in header order, then the
//   Adam first moments, then the second moments
//
// The JSON is dumped with sorted keys and shortest round-trip doubles, so
// equal models produce equal bytes.

#ifndef TWINTOWER_TRAINING_CHECKPOINT_H_
#define TWINTOWER_TRAINING_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "twintower/model/two_tower.h"
#include "twintower/training/trainer.h"

namespace twintower::training {

inline constexpr std::string_view kCheckpointMagic = "TTWR1";

struct CheckpointMeta {
  std::string schema_hash;
  std::vector<std::string> id_items;
  TrainConfig train;
  std::vector<double> epoch_loss;
  nlohmann::json run = nlohmann::json::object();  // resolved run config
};

struct Checkpoint {
  model::TwoTowerModel model;
  AdamState adam;
  CheckpointMeta meta;
};

std::string SerializeCheckpoint(const model::TwoTowerModel& model,
                                const AdamState& adam,
                                const CheckpointMeta& meta);

// Throws InputError on a bad magic string, malformed header, or truncated
// or oversized payload.
Checkpoint ParseCheckpoint(std::string_view bytes);

void SaveCheckpoint(const std::filesystem::path& path,
                    const model::TwoTowerModel& model, const AdamState& adam,
                    const CheckpointMeta& meta);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

// Throws InputError printing both digests when they differ.
void RequireSchemaMatch(const CheckpointMeta& meta,
                        const std::string& corpus_hash);

}  // namespace twintower::training

#endif  // TWINTOWER_TRAINING_CHECKPOINT_H_
