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

// Item tower: per-channel projections to a common width, softmax attention
// over channels with shared (P, b, z), weighted concatenation and a
// one-layer tanh perceptron to the output embedding.
//
// For a batch of B items and channel set M every channel embedding H_m is a
// [B, w] matrix. Pre-scores are O_m = tanh(H_m P + b) z, the weights are
// alpha = softmax over m of O_m, and the item embedding is
//
//   i = tanh(concat_m(alpha_m * H_m) W_out + b_out).
//
// Concatenation mode is the same computation with every alpha_m = 1.

#ifndef TWINTOWER_MODEL_ITEM_TOWER_H_
#define TWINTOWER_MODEL_ITEM_TOWER_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twintower/features/encoder.h"
#include "twintower/numerics/tensor.h"

namespace twintower::model {

// Declaration order is the concatenation order.
enum class Channel { kId, kCategorical, kSynopsis, kCoverart };

inline constexpr Channel kAllChannels[] = {Channel::kId, Channel::kCategorical,
                                           Channel::kSynopsis,
                                           Channel::kCoverart};

std::string_view ChannelName(Channel c);
Channel ParseChannel(std::string_view name);

enum class FusionKind { kAttention, kConcatenation };

std::string_view FusionKindName(FusionKind k);
FusionKind ParseFusionKind(std::string_view name);  // "att" | "con"

struct FusionMode {
  FusionKind kind = FusionKind::kAttention;
  std::vector<Channel> channels{std::begin(kAllChannels),
                                std::end(kAllChannels)};

  // Sorts into concatenation order and removes duplicates; throws
  // InputError on an empty channel set.
  void Normalize();
  bool Has(Channel c) const;
  std::string Label() const;  // e.g. "att[id,categorical]"

  friend bool operator==(const FusionMode&, const FusionMode&) = default;
};

struct ItemTowerDims {
  std::size_t categorical = 0;
  std::size_t synopsis = 0;
  std::size_t coverart = 0;
  std::size_t id_rows = 0;
  std::size_t attention_width = 128;
  std::size_t embedding_dim = 512;
};

// Handles onto the trainable tensors; copies alias the same storage.
struct ItemTowerParams {
  numerics::Tensor id_table;  // [id_rows, w]; shared with the user tower
  numerics::Tensor categorical_w, categorical_b;
  numerics::Tensor synopsis_w, synopsis_b;
  numerics::Tensor coverart_w, coverart_b;
  numerics::Tensor attention_p;  // [w, w]
  numerics::Tensor attention_b;  // [w]
  numerics::Tensor attention_z;  // [w, 1]
  numerics::Tensor output_w;     // [|M| * w, d]
  numerics::Tensor output_b;     // [d]
};

// Raw channel inputs stacked row-wise for a batch of items.
struct ItemBatch {
  std::size_t size = 0;
  numerics::Tensor categorical;
  numerics::Tensor synopsis;
  numerics::Tensor coverart;
  std::vector<std::size_t> id_rows;  // numerics::kZeroRow for cold items
};

ItemBatch MakeItemBatch(
    std::span<const features::EncodedItemFeatures* const> items,
    const FusionMode& mode);

struct ChannelEmbeddings {
  std::vector<Channel> channels;
  std::vector<numerics::Tensor> embeddings;  // [B, w] each
};

// Linear map of each raw channel to the common width; the ID channel is a
// table lookup, all zeros for items without an ID row.
ChannelEmbeddings ChannelEmbed(const ItemBatch& batch,
                               const ItemTowerParams& params,
                               const FusionMode& mode);

// [B, |M|] softmax weights over channels.
numerics::Tensor AttentionWeights(const ChannelEmbeddings& channels,
                                  const ItemTowerParams& params);

// alpha == nullptr means every weight is 1 (concatenation).
numerics::Tensor Fuse(const ChannelEmbeddings& channels,
                      const numerics::Tensor* alpha,
                      const ItemTowerParams& params);

struct ItemTowerOutput {
  numerics::Tensor embedding;             // [B, d]
  std::optional<numerics::Tensor> alpha;  // attention mode only
};

// Full tower. With unit_attention the attention branch is bypassed and the
// channels are fused with alpha = 1.
ItemTowerOutput EmbedItems(const ItemBatch& batch,
                           const ItemTowerParams& params,
                           const FusionMode& mode,
                           bool unit_attention = false);

}  // namespace twintower::model

#endif  // TWINTOWER_MODEL_ITEM_TOWER_H_
