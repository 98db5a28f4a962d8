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

#include <gtest/gtest.h>

#include "testing.h"
#include "twintower/error.h"
#include "twintower/model/two_tower.h"
#include "twintower/numerics/ops.h"

namespace twintower::model {
namespace {

namespace nx = numerics;

constexpr ModelDims kDims{5, 4, 4, 6, 3};

TEST(UserTowerTest, TruncateKeepsMostRecent) {
  std::vector<std::size_t> rows{1, 2, 3, 4, 5};
  EXPECT_EQ(TruncateHistory(rows, 3), (std::vector<std::size_t>{3, 4, 5}));
  EXPECT_EQ(TruncateHistory(rows, 9), rows);
  EXPECT_TRUE(TruncateHistory(rows, 0).empty());
}

TEST(UserTowerTest, EmptyHistoryEncodesToZeros) {
  TwoTowerModel m(testing::TinyModelConfig(), kDims, 2);
  nx::Tensor h = EncodeHistory({}, m.user_params());
  ASSERT_EQ(h.shape(), (nx::Shape{1, 4}));
  for (double v : h.values()) EXPECT_EQ(v, 0.0);
}

TEST(UserTowerTest, HistoryPoolingMatchesPlainLoops) {
  TwoTowerModel m(testing::TinyModelConfig(), kDims, 2);
  const auto& p = m.user_params();
  std::vector<std::size_t> hist{4, 0, 4, 2};
  nx::Tensor got = EncodeHistory(hist, p);
  const std::size_t n = hist.size(), w = 4;
  std::vector<std::vector<double>> e(n, std::vector<double>(w));
  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) {
    // Position 0 is the newest entry, i.e. the last one.
    std::size_t pos = n - 1 - j;
    for (std::size_t k = 0; k < w; ++k) {
      e[j][k] = p.history_table.at(hist[j], k) + p.position_table.at(pos, k);
      s[j] += p.query[k] * std::tanh(e[j][k]);
    }
  }
  double z = 0.0;
  for (double v : s) z += std::exp(v);
  for (std::size_t k = 0; k < w; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += std::exp(s[j]) / z * e[j][k];
    EXPECT_NEAR(got.at(0, k), acc, 1e-14);
  }
}

TEST(UserTowerTest, ResidualBlockMatchesPlainLoops) {
  nx::Tensor x = nx::Tensor::Matrix(1, 2, {0.5, -1.0});
  ResidualBlock b{nx::Tensor::Matrix(2, 2, {1, 2, 3, 4}), nx::Tensor::Vector({0.1, 0.2}),
                  nx::Tensor::Matrix(2, 2, {0.5, 0, 0, 0.5}),
                  nx::Tensor::Vector({1, -1})};
  nx::Tensor y = ApplyResidualBlock(x, b);
  double i0 = std::tanh(0.5 * 1 + -1.0 * 3 + 0.1);
  double i1 = std::tanh(0.5 * 2 + -1.0 * 4 + 0.2);
  EXPECT_NEAR(y.at(0, 0), 0.5 + 0.5 * i0 + 1, 1e-15);
  EXPECT_NEAR(y.at(0, 1), -1.0 + 0.5 * i1 - 1, 1e-15);
}

TEST(UserTowerTest, OutputWidthAndFeatureChecks) {
  TwoTowerModel m(testing::TinyModelConfig(), kDims, 2);
  UserInput u{{1, 2}, {0, 1, 0}};
  EXPECT_EQ(m.EmbedUser(u).shape(), (nx::Shape{1, 6}));
  u.features.pop_back();
  EXPECT_THROW(m.EmbedUser(u), ShapeError);
  UserInput longer{{0, 1, 2, 3, 4, 5}, {0, 0, 1}};
  EXPECT_THROW(m.EmbedUser(longer), ShapeError);
}

TEST(UserTowerTest, FeaturesChangeTheEmbedding) {
  TwoTowerModel m(testing::TinyModelConfig(), kDims, 2);
  auto a = m.EmbedUser({{1}, {1, 0, 0}});
  auto b = m.EmbedUser({{1}, {0, 1, 0}});
  EXPECT_FALSE(nx::BitwiseEqual(a, b));
}

}  // namespace
}  // namespace twintower::model
