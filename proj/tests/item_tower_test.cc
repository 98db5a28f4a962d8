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


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "testing.h"
#include "twintower/error.h"
#include "twintower/model/two_tower.h"
#include "twintower/numerics/ops.h"

namespace twintower::model {
namespace {

namespace nx = numerics;

constexpr ModelDims kDims{5, 4, 4, 3, 2};

std::vector<features::EncodedItemFeatures> RandomItems(std::size_t n,
                                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<features::EncodedItemFeatures> items(n);
  for (std::size_t i = 0; i < n; ++i) {
    items[i].categorical = testing::RandomVector(kDims.categorical, 1.0, rng);
    items[i].synopsis = testing::RandomVector(kDims.synopsis, 1.0, rng);
    items[i].coverart = testing::RandomVector(kDims.coverart, 1.0, rng);
    items[i].coverart_missing = false;
    if (i % 3 != 2) items[i].id_index = i % kDims.id_rows;
  }
  return items;
}

std::vector<const features::EncodedItemFeatures*> Pointers(
    const std::vector<features::EncodedItemFeatures>& items) {
  std::vector<const features::EncodedItemFeatures*> out;
  for (const auto& f : items) out.push_back(&f);
  return out;
}

// Plain-loop item tower for one item, independent of the tensor ops.
std::vector<double> ReferenceItem(const features::EncodedItemFeatures& f,
                                  const ItemTowerParams& p,
                                  const FusionMode& mode,
                                  std::vector<double>* alpha_out) {
  const std::size_t w = p.id_table.cols();
  auto linear = [&](const std::vector<double>& x, const nx::Tensor& W,
                    const nx::Tensor& b) {
    std::vector<double> h(w);
    for (std::size_t j = 0; j < w; ++j) {
      double acc = b[j];
      for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * W.at(i, j);
      h[j] = acc;
    }
    return h;
  };
  std::vector<std::vector<double>> hs;
  for (Channel c : mode.channels) {
    switch (c) {
      case Channel::kId: {
        std::vector<double> h(w, 0.0);
        if (f.id_index) {
          for (std::size_t j = 0; j < w; ++j) h[j] = p.id_table.at(*f.id_index, j);
        }
        hs.push_back(h);
        break;
      }
      case Channel::kCategorical:
        hs.push_back(linear(f.categorical, p.categorical_w, p.categorical_b));
        break;
      case Channel::kSynopsis:
        hs.push_back(linear(f.synopsis, p.synopsis_w, p.synopsis_b));
        break;
      case Channel::kCoverart:
        hs.push_back(linear(f.coverart, p.coverart_w, p.coverart_b));
        break;
    }
  }
  std::vector<double> alpha(hs.size(), 1.0);
  if (mode.kind == FusionKind::kAttention) {
    std::vector<double> o(hs.size());
    for (std::size_t m = 0; m < hs.size(); ++m) {
      double score = 0.0;
      for (std::size_t k = 0; k < w; ++k) {
        double pre = p.attention_b[k];
        for (std::size_t j = 0; j < w; ++j) pre += hs[m][j] * p.attention_p.at(j, k);
        score += std::tanh(pre) * p.attention_z[k];
      }
      o[m] = score;
    }
    double total = 0.0;
    for (std::size_t m = 0; m < o.size(); ++m) total += std::exp(o[m]);
    for (std::size_t m = 0; m < o.size(); ++m) alpha[m] = std::exp(o[m]) / total;
  }
  if (alpha_out != nullptr) *alpha_out = alpha;
  std::vector<double> fused;
  for (std::size_t m = 0; m < hs.size(); ++m) {
    for (double v : hs[m]) fused.push_back(alpha[m] * v);
  }
  const std::size_t d = p.output_b.size();
  std::vector<double> out(d);
  for (std::size_t k = 0; k < d; ++k) {
    double acc = p.output_b[k];
    for (std::size_t j = 0; j < fused.size(); ++j) acc += fused[j] * p.output_w.at(j, k);
    out[k] = std::tanh(acc);
  }
  return out;
}

TEST(FusionModeTest, NormalizeSortsAndRejectsEmpty) {
  FusionMode m;
  m.channels = {Channel::kCoverart, Channel::kId, Channel::kCoverart};
  m.Normalize();
  EXPECT_EQ(m.channels, (std::vector<Channel>{Channel::kId, Channel::kCoverart}));
  EXPECT_EQ(m.Label(), "att[id,coverart]");
  m.channels.clear();
  EXPECT_THROW(m.Normalize(), InputError);
  EXPECT_THROW(ParseChannel("audio"), InputError);
  EXPECT_EQ(ParseFusionKind("con"), FusionKind::kConcatenation);
  EXPECT_THROW(ParseFusionKind("sum"), InputError);
}

TEST(ItemTowerTest, MatchesPlainLoopReference) {
  for (FusionKind kind : {FusionKind::kAttention, FusionKind::kConcatenation}) {
    ModelConfig cfg = testing::TinyModelConfig();
    cfg.fusion.kind = kind;
    TwoTowerModel model(cfg, kDims, 11);
    auto items = RandomItems(7, 5);
    auto out = model.EmbedItems(Pointers(items));
    ASSERT_EQ(out.embedding.shape(), (nx::Shape{7, cfg.embedding_dim}));
    EXPECT_EQ(out.alpha.has_value(), kind == FusionKind::kAttention);
    for (std::size_t i = 0; i < items.size(); ++i) {
      std::vector<double> alpha;
      auto ref = ReferenceItem(items[i], model.item_params(), model.config().fusion,
                               &alpha);
      for (std::size_t k = 0; k < ref.size(); ++k) {
        EXPECT_NEAR(out.embedding.at(i, k), ref[k], 1e-12);
      }
      if (out.alpha) {
        for (std::size_t m = 0; m < alpha.size(); ++m) {
          EXPECT_NEAR(out.alpha->at(i, m), alpha[m], 1e-12);
        }
      }
    }
  }
}

TEST(ItemTowerTest, AttentionWeightsArePositiveAndNormalized) {
  TwoTowerModel model(testing::TinyModelConfig(), kDims, 3);
  auto items = RandomItems(500, 9);
  auto out = model.EmbedItems(Pointers(items));
  ASSERT_TRUE(out.alpha.has_value());
  for (std::size_t i = 0; i < items.size(); ++i) {
    double sum = 0.0;
    for (std::size_t m = 0; m < 4; ++m) {
      EXPECT_GT(out.alpha->at(i, m), 0.0);
      sum += out.alpha->at(i, m);
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(ItemTowerTest, SingleChannelWeightIsExactlyOne) {
  for (Channel c : kAllChannels) {
    ModelConfig cfg = testing::TinyModelConfig();
    cfg.fusion.channels = {c};
    TwoTowerModel model(cfg, kDims, 4);
    auto items = RandomItems(20, 2);
    auto out = model.EmbedItems(Pointers(items));
    for (std::size_t i = 0; i < items.size(); ++i) {
      EXPECT_EQ(out.alpha->at(i, 0), 1.0) << ChannelName(c);
    }
  }
}

TEST(ItemTowerTest, ConcatenationEqualsUnitAttentionBitwise) {
  ModelConfig att = testing::TinyModelConfig();
  att.unit_attention = true;
  ModelConfig con = testing::TinyModelConfig();
  con.fusion.kind = FusionKind::kConcatenation;
  TwoTowerModel a(att, kDims, 8);
  TwoTowerModel c(con, kDims, 8);
  auto items = RandomItems(50, 1);
  auto ea = a.EmbedItems(Pointers(items));
  auto ec = c.EmbedItems(Pointers(items));
  EXPECT_FALSE(ea.alpha.has_value());
  EXPECT_TRUE(nx::BitwiseEqual(ea.embedding, ec.embedding));
}

TEST(ItemTowerTest, ExplicitOnesMatchConcatenationBitwise) {
  TwoTowerModel model(testing::TinyModelConfig(), kDims, 6);
  auto items = RandomItems(12, 4);
  auto ptrs = Pointers(items);
  ItemBatch batch = MakeItemBatch(ptrs, model.config().fusion);
  auto channels = ChannelEmbed(batch, model.item_params(), model.config().fusion);
  nx::Tensor ones = nx::Tensor::Filled({items.size(), 4}, 1.0);
  EXPECT_TRUE(nx::BitwiseEqual(Fuse(channels, &ones, model.item_params()),
                               Fuse(channels, nullptr, model.item_params())));
}

TEST(ItemTowerTest, MissingIdRowGivesZeroIdEmbedding) {
  TwoTowerModel model(testing::TinyModelConfig(), kDims, 6);
  auto items = RandomItems(3, 4);
  items[0].id_index.reset();
  auto ptrs = Pointers(items);
  ItemBatch batch = MakeItemBatch(ptrs, model.config().fusion);
  EXPECT_EQ(batch.id_rows[0], nx::kZeroRow);
  auto channels = ChannelEmbed(batch, model.item_params(), model.config().fusion);
  ASSERT_EQ(channels.channels[0], Channel::kId);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(channels.embeddings[0].at(0, j), 0.0);
}

TEST(ItemTowerTest, RejectsRaggedChannels) {
  TwoTowerModel model(testing::TinyModelConfig(), kDims, 6);
  auto items = RandomItems(2, 4);
  items[1].synopsis.pop_back();
  EXPECT_THROW(model.EmbedItems(Pointers(items)), ShapeError);
  EXPECT_THROW(model.EmbedItems({}), InputError);
}

TEST(ParameterSetTest, InitDependsOnNameNotNeighbours) {
  ParameterSet a, b;
  a.Add("x", {3});
  a.Add("y", {4});
  b.Add("y", {4});
  a.InitUniform(5, 0.05);
  b.InitUniform(5, 0.05);
  EXPECT_TRUE(nx::BitwiseEqual(a.Get("y"), b.Get("y")));
  for (double v : a.Get("x").values()) EXPECT_LE(std::abs(v), 0.05);
  EXPECT_THROW(a.Add("x", {1}), Error);
  EXPECT_EQ(a.TotalSize(), 7u);
}

TEST(TwoTowerTest, SharedTensorsMatchAcrossFusionModes) {
  ModelConfig con = testing::TinyModelConfig();
  con.fusion.kind = FusionKind::kConcatenation;
  TwoTowerModel a(testing::TinyModelConfig(), kDims, 21);
  TwoTowerModel c(con, kDims, 21);
  EXPECT_TRUE(a.parameters().Contains("item/attention_z"));
  EXPECT_FALSE(c.parameters().Contains("item/attention_z"));
  for (const auto& e : c.parameters().entries()) {
    EXPECT_TRUE(nx::BitwiseEqual(e.tensor, a.parameters().Get(e.name))) << e.name;
  }
}

TEST(TwoTowerTest, HistoryTableIsTiedToIdTable) {
  TwoTowerModel m(testing::TinyModelConfig(), kDims, 1);
  EXPECT_TRUE(m.user_params().history_table.SameStorage(m.item_params().id_table));
  ModelConfig untied = testing::TinyModelConfig();
  untied.tie_history_embeddings = false;
  TwoTowerModel u(untied, kDims, 1);
  EXPECT_FALSE(u.user_params().history_table.SameStorage(u.item_params().id_table));
}

TEST(TwoTowerTest, ConfigJsonRoundTrip) {
  ModelConfig cfg = testing::TinyModelConfig();
  cfg.fusion.kind = FusionKind::kConcatenation;
  cfg.fusion.channels = {Channel::kSynopsis, Channel::kCategorical};
  cfg.fusion.Normalize();
  ModelConfig back = nlohmann::json(cfg).get<ModelConfig>();
  EXPECT_EQ(back.fusion, cfg.fusion);
  EXPECT_EQ(back.embedding_dim, cfg.embedding_dim);
  EXPECT_EQ(back.init_half_range, cfg.init_half_range);
}

}  // namespace
}  // namespace twintower::model
