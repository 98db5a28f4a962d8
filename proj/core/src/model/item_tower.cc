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

#include "twintower/model/item_tower.h"

#include <algorithm>

#include "twintower/error.h"
#include "twintower/numerics/ops.h"

namespace twintower::model {

namespace nx = numerics;

std::string_view ChannelName(Channel c) {
  switch (c) {
    case Channel::kId: return "id";
    case Channel::kCategorical: return "categorical";
    case Channel::kSynopsis: return "synopsis";
    case Channel::kCoverart: return "coverart";
  }
  return "unknown";
}

Channel ParseChannel(std::string_view name) {
  for (Channel c : kAllChannels) {
    if (ChannelName(c) == name) return c;
  }
  throw InputError("unknown channel '" + std::string(name) +
                   "' (expected id, categorical, synopsis or coverart)");
}

std::string_view FusionKindName(FusionKind k) {
  return k == FusionKind::kAttention ? "att" : "con";
}

FusionKind ParseFusionKind(std::string_view name) {
  if (name == "att" || name == "attention") return FusionKind::kAttention;
  if (name == "con" || name == "concatenation") {
    return FusionKind::kConcatenation;
  }
  throw InputError("unknown fusion '" + std::string(name) +
                   "' (expected att or con)");
}

void FusionMode::Normalize() {
  std::sort(channels.begin(), channels.end());
  channels.erase(std::unique(channels.begin(), channels.end()),
                 channels.end());
  if (channels.empty()) throw InputError("fusion channel set is empty");
}

bool FusionMode::Has(Channel c) const {
  return std::find(channels.begin(), channels.end(), c) != channels.end();
}

std::string FusionMode::Label() const {
  std::string out(FusionKindName(kind));
  out += '[';
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (i > 0) out += ',';
    out += ChannelName(channels[i]);
  }
  out += ']';
  return out;
}

namespace {

nx::Tensor Stack(std::span<const features::EncodedItemFeatures* const> items,
                 std::vector<double> features::EncodedItemFeatures::*field) {
  std::size_t width = (items.front()->*field).size();
  if (width == 0) throw InputError("item channel has zero width");
  std::vector<double> values;
  values.reserve(items.size() * width);
  for (const auto* f : items) {
    const auto& v = f->*field;
    if (v.size() != width) {
      throw ShapeError("item channel widths differ within a batch");
    }
    values.insert(values.end(), v.begin(), v.end());
  }
  return nx::Tensor::Matrix(items.size(), width, std::move(values));
}

nx::Tensor Linear(const nx::Tensor& x, const nx::Tensor& w,
                  const nx::Tensor& b) {
  return nx::Add(nx::MatMul(x, w), b);
}

}  // namespace

ItemBatch MakeItemBatch(
    std::span<const features::EncodedItemFeatures* const> items,
    const FusionMode& mode) {
  if (items.empty()) throw InputError("empty item batch");
  ItemBatch batch;
  batch.size = items.size();
  if (mode.Has(Channel::kCategorical)) {
    batch.categorical = Stack(items, &features::EncodedItemFeatures::categorical);
  }
  if (mode.Has(Channel::kSynopsis)) {
    batch.synopsis = Stack(items, &features::EncodedItemFeatures::synopsis);
  }
  if (mode.Has(Channel::kCoverart)) {
    batch.coverart = Stack(items, &features::EncodedItemFeatures::coverart);
  }
  batch.id_rows.reserve(items.size());
  for (const auto* f : items) {
    batch.id_rows.push_back(f->id_index.value_or(nx::kZeroRow));
  }
  return batch;
}

ChannelEmbeddings ChannelEmbed(const ItemBatch& batch,
                               const ItemTowerParams& params,
                               const FusionMode& mode) {
  ChannelEmbeddings out;
  for (Channel c : mode.channels) {
    nx::Tensor h;
    switch (c) {
      case Channel::kId:
        h = nx::EmbeddingLookup(params.id_table, batch.id_rows);
        break;
      case Channel::kCategorical:
        h = Linear(batch.categorical, params.categorical_w,
                   params.categorical_b);
        break;
      case Channel::kSynopsis:
        h = Linear(batch.synopsis, params.synopsis_w, params.synopsis_b);
        break;
      case Channel::kCoverart:
        h = Linear(batch.coverart, params.coverart_w, params.coverart_b);
        break;
    }
    out.channels.push_back(c);
    out.embeddings.push_back(std::move(h));
  }
  return out;
}

nx::Tensor AttentionWeights(const ChannelEmbeddings& channels,
                            const ItemTowerParams& params) {
  std::vector<nx::Tensor> scores;
  scores.reserve(channels.embeddings.size());
  for (const auto& h : channels.embeddings) {
    nx::Tensor hidden = nx::Tanh(Linear(h, params.attention_p, params.attention_b));
    scores.push_back(nx::MatMul(hidden, params.attention_z));  // [B, 1]
  }
  return nx::Softmax(nx::Concat(scores));
}

nx::Tensor Fuse(const ChannelEmbeddings& channels, const nx::Tensor* alpha,
                const ItemTowerParams& params) {
  std::size_t m = channels.embeddings.size();
  std::vector<nx::Tensor> parts;
  parts.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const nx::Tensor& h = channels.embeddings[k];
    if (alpha == nullptr) {
      parts.push_back(h);
      continue;
    }
    // Column k of alpha broadcast across the channel width via a selector
    // matrix whose row k is all ones.
    std::size_t w = h.cols();
    std::vector<double> selector(m * w, 0.0);
    std::fill_n(selector.begin() + k * w, w, 1.0);
    nx::Tensor broadcast =
        nx::MatMul(*alpha, nx::Tensor::Matrix(m, w, std::move(selector)));
    parts.push_back(nx::Mul(broadcast, h));
  }
  return nx::Tanh(Linear(nx::Concat(parts), params.output_w, params.output_b));
}

ItemTowerOutput EmbedItems(const ItemBatch& batch,
                           const ItemTowerParams& params,
                           const FusionMode& mode, bool unit_attention) {
  ChannelEmbeddings channels = ChannelEmbed(batch, params, mode);
  if (mode.kind == FusionKind::kConcatenation || unit_attention) {
    return {Fuse(channels, nullptr, params), std::nullopt};
  }
  nx::Tensor alpha = AttentionWeights(channels, params);
  nx::Tensor embedding = Fuse(channels, &alpha, params);
  return {std::move(embedding), std::move(alpha)};
}

}  // namespace twintower::model
