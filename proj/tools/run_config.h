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

// Resolved configuration of one CLI run: a JSON config file with
// command-line overrides on top.

#ifndef TWINTOWER_TOOLS_RUN_CONFIG_H_
#define TWINTOWER_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twintower/data/synthetic.h"
#include "twintower/eval/evaluator.h"
#include "twintower/eval/split.h"
#include "twintower/features/categorical.h"
#include "twintower/model/two_tower.h"
#include "twintower/training/trainer.h"

namespace twintower::cli {

struct AblationRow {
  std::string label;
  model::FusionMode fusion;
};

void to_json(nlohmann::json& j, const AblationRow& r);
void from_json(const nlohmann::json& j, AblationRow& r);

// The eight rows of the default grid: three single-channel rows, ID only,
// then Con and Att with and without the ID channel.
std::vector<AblationRow> DefaultAblationRows();

struct RunConfig {
  std::filesystem::path data_dir = "data";
  std::filesystem::path out_dir = "out";
  std::filesystem::path checkpoint;  // empty: <out_dir>/model.ttwr
  std::uint64_t seed = 1;
  std::string baseline;  // "" or "random"
  data::SyntheticSpec synthetic;
  eval::SplitConfig split = eval::SplitConfig::Days();
  features::SchemaConfig schema;
  model::ModelConfig model;
  training::TrainConfig train;
  eval::EvalConfig eval;
  std::vector<AblationRow> ablation_rows = DefaultAblationRows();
  std::string ablation_baseline = "synopsis";

  std::filesystem::path CheckpointPath() const;

  // Copies the run seed into the training and synthetic seeds and checks
  // every section. Throws InputError.
  void Resolve();

  nlohmann::json ToJson() const;
  static RunConfig FromJson(const nlohmann::json& j);
};

// Reads a JSON config file. Throws InputError naming the path.
RunConfig LoadRunConfig(const std::filesystem::path& path);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::string> fusion;
  std::optional<std::string> channels;  // comma-separated
  std::optional<bool> with_id;
  std::optional<std::string> baseline;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::filesystem::path> data_dir;
  std::optional<std::filesystem::path> checkpoint;
};

void ApplyOverrides(const Overrides& o, RunConfig& config);

// "true/false/1/0/yes/no/on/off"; throws InputError otherwise.
bool ParseBool(std::string_view text);

}  // namespace twintower::cli

#endif  // TWINTOWER_TOOLS_RUN_CONFIG_H_
