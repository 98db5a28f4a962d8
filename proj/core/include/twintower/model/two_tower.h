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

#ifndef TWINTOWER_MODEL_TWO_TOWER_H_
#define TWINTOWER_MODEL_TWO_TOWER_H_

#include <cstddef>
#include <cstdint>
#include <span>

#include <nlohmann/json.hpp>

#include "twintower/features/encoder.h"
#include "twintower/model/item_tower.h"
#include "twintower/model/parameters.h"
#include "twintower/model/user_tower.h"

namespace twintower::model {

struct ModelConfig {
  std::size_t embedding_dim = 512;
  std::size_t attention_width = 128;
  std::size_t user_feature_width = 64;
  std::size_t history_length = 50;
  std::size_t residual_blocks = 3;
  bool tie_history_embeddings = true;
  double init_half_range = 0.05;
  FusionMode fusion;
  // Attention mode with every channel weight pinned to 1.
  bool unit_attention = false;
};

void to_json(nlohmann::json& j, const ModelConfig& c);
void from_json(const nlohmann::json& j, ModelConfig& c);

// Input widths fixed by the data.
struct ModelDims {
  std::size_t categorical = 0;
  std::size_t synopsis = 0;
  std::size_t coverart = 0;
  std::size_t id_rows = 0;
  std::size_t user_features = 0;

  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

void to_json(nlohmann::json& j, const ModelDims& d);
void from_json(const nlohmann::json& j, ModelDims& d);

class TwoTowerModel {
 public:
  // Parameters are drawn uniformly from [-init_half_range, init_half_range].
  TwoTowerModel(ModelConfig config, ModelDims dims, std::uint64_t seed);

  TwoTowerModel(const TwoTowerModel&) = delete;
  TwoTowerModel& operator=(const TwoTowerModel&) = delete;
  TwoTowerModel(TwoTowerModel&&) = default;
  TwoTowerModel& operator=(TwoTowerModel&&) = default;

  ItemTowerOutput EmbedItems(
      std::span<const features::EncodedItemFeatures* const> items) const;
  numerics::Tensor EmbedUser(const UserInput& user) const;

  const ModelConfig& config() const { return config_; }
  const ModelDims& dims() const { return dims_; }
  const ParameterSet& parameters() const { return params_; }
  ParameterSet& parameters() { return params_; }
  const ItemTowerParams& item_params() const { return item_; }
  const UserTowerParams& user_params() const { return user_; }

 private:
  ModelConfig config_;
  ModelDims dims_;
  ParameterSet params_;
  ItemTowerParams item_;
  UserTowerParams user_;
};

}  // namespace twintower::model

#endif  // TWINTOWER_MODEL_TWO_TOWER_H_
