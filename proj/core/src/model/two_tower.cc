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

#include "twintower/model/two_tower.h"

#include <string>

#include "twintower/error.h"

namespace twintower::model {

void to_json(nlohmann::json& j, const ModelConfig& c) {
  std::vector<std::string> channels;
  for (Channel ch : c.fusion.channels) channels.emplace_back(ChannelName(ch));
  j = nlohmann::json{{"embedding_dim", c.embedding_dim},
                     {"attention_width", c.attention_width},
                     {"user_feature_width", c.user_feature_width},
                     {"history_length", c.history_length},
                     {"residual_blocks", c.residual_blocks},
                     {"tie_history_embeddings", c.tie_history_embeddings},
                     {"init_half_range", c.init_half_range},
                     {"fusion", FusionKindName(c.fusion.kind)},
                     {"channels", channels},
                     {"unit_attention", c.unit_attention}};
}

void from_json(const nlohmann::json& j, ModelConfig& c) {
  ModelConfig d;
  c.embedding_dim = j.value("embedding_dim", d.embedding_dim);
  c.attention_width = j.value("attention_width", d.attention_width);
  c.user_feature_width = j.value("user_feature_width", d.user_feature_width);
  c.history_length = j.value("history_length", d.history_length);
  c.residual_blocks = j.value("residual_blocks", d.residual_blocks);
  c.tie_history_embeddings =
      j.value("tie_history_embeddings", d.tie_history_embeddings);
  c.init_half_range = j.value("init_half_range", d.init_half_range);
  c.fusion.kind = ParseFusionKind(
      j.value("fusion", std::string(FusionKindName(d.fusion.kind))));
  if (j.contains("channels")) {
    c.fusion.channels.clear();
    for (const auto& name : j.at("channels")) {
      c.fusion.channels.push_back(ParseChannel(name.get<std::string>()));
    }
  }
  c.fusion.Normalize();
  c.unit_attention = j.value("unit_attention", d.unit_attention);
}

void to_json(nlohmann::json& j, const ModelDims& d) {
  j = nlohmann::json{{"categorical", d.categorical},
                     {"synopsis", d.synopsis},
                     {"coverart", d.coverart},
                     {"id_rows", d.id_rows},
                     {"user_features", d.user_features}};
}

void from_json(const nlohmann::json& j, ModelDims& d) {
  j.at("categorical").get_to(d.categorical);
  j.at("synopsis").get_to(d.synopsis);
  j.at("coverart").get_to(d.coverart);
  j.at("id_rows").get_to(d.id_rows);
  j.at("user_features").get_to(d.user_features);
}

TwoTowerModel::TwoTowerModel(ModelConfig config, ModelDims dims,
                             std::uint64_t seed)
    : config_(std::move(config)), dims_(dims) {
  config_.fusion.Normalize();
  const std::size_t w = config_.attention_width;
  const std::size_t d = config_.embedding_dim;
  if (w == 0 || d == 0) throw InputError("model widths must be positive");
  if (dims_.id_rows == 0) {
    throw InputError("model needs at least one item with an ID row");
  }
  const FusionMode& mode = config_.fusion;

  item_.id_table = params_.Add("item/id_table", {dims_.id_rows, w});
  if (mode.Has(Channel::kCategorical)) {
    item_.categorical_w = params_.Add("item/categorical_w", {dims_.categorical, w});
    item_.categorical_b = params_.Add("item/categorical_b", {w});
  }
  if (mode.Has(Channel::kSynopsis)) {
    item_.synopsis_w = params_.Add("item/synopsis_w", {dims_.synopsis, w});
    item_.synopsis_b = params_.Add("item/synopsis_b", {w});
  }
  if (mode.Has(Channel::kCoverart)) {
    item_.coverart_w = params_.Add("item/coverart_w", {dims_.coverart, w});
    item_.coverart_b = params_.Add("item/coverart_b", {w});
  }
  if (mode.kind == FusionKind::kAttention) {
    item_.attention_p = params_.Add("item/attention_p", {w, w});
    item_.attention_b = params_.Add("item/attention_b", {w});
    item_.attention_z = params_.Add("item/attention_z", {w, 1});
  }
  item_.output_w = params_.Add("item/output_w", {mode.channels.size() * w, d});
  item_.output_b = params_.Add("item/output_b", {d});

  user_.history_table = config_.tie_history_embeddings
                            ? item_.id_table
                            : params_.Add("user/history_table", {dims_.id_rows, w});
  user_.position_table =
      params_.Add("user/position_table", {config_.history_length, w});
  user_.query = params_.Add("user/query", {1, w});
  std::size_t joined = w;
  if (dims_.user_features > 0) {
    std::size_t f = config_.user_feature_width;
    user_.feature_w = params_.Add("user/feature_w", {dims_.user_features, f});
    user_.feature_b = params_.Add("user/feature_b", {f});
    joined += f;
  }
  user_.input_w = params_.Add("user/input_w", {joined, d});
  user_.input_b = params_.Add("user/input_b", {d});
  for (std::size_t k = 0; k < config_.residual_blocks; ++k) {
    std::string prefix = "user/block" + std::to_string(k) + "/";
    user_.blocks.push_back(ResidualBlock{
        params_.Add(prefix + "a1", {d, d}),
        params_.Add(prefix + "b1", {d}),
        params_.Add(prefix + "a2", {d, d}),
        params_.Add(prefix + "b2", {d}),
    });
  }
  params_.InitUniform(seed, config_.init_half_range);
}

ItemTowerOutput TwoTowerModel::EmbedItems(
    std::span<const features::EncodedItemFeatures* const> items) const {
  ItemBatch batch = MakeItemBatch(items, config_.fusion);
  return model::EmbedItems(batch, item_, config_.fusion, config_.unit_attention);
}

numerics::Tensor TwoTowerModel::EmbedUser(const UserInput& user) const {
  return model::EmbedUser(user, user_);
}

}  // namespace twintower::model
