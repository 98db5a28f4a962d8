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

#include "twintower/model/user_tower.h"

#include "twintower/error.h"
#include "twintower/numerics/ops.h"

namespace twintower::model {

namespace nx = numerics;

std::vector<std::size_t> TruncateHistory(std::span<const std::size_t> rows,
                                         std::size_t max_length) {
  std::size_t skip = rows.size() > max_length ? rows.size() - max_length : 0;
  return {rows.begin() + static_cast<std::ptrdiff_t>(skip), rows.end()};
}

nx::Tensor EncodeHistory(std::span<const std::size_t> history,
                         const UserTowerParams& params) {
  std::size_t width = params.history_table.cols();
  if (history.empty()) return nx::Tensor::Zeros({1, width});
  std::size_t n = history.size();
  if (n > params.position_table.rows()) {
    throw ShapeError("history of length " + std::to_string(n) +
                     " exceeds positional table of " +
                     std::to_string(params.position_table.rows()));
  }
  std::vector<std::size_t> positions(n);
  for (std::size_t j = 0; j < n; ++j) positions[j] = n - 1 - j;
  nx::Tensor e = nx::Add(nx::EmbeddingLookup(params.history_table, history),
                         nx::EmbeddingLookup(params.position_table, positions));
  nx::Tensor scores =
      nx::MatMul(params.query, nx::Tanh(e), /*transpose_b=*/true);  // [1, n]
  return nx::MatMul(nx::Softmax(scores), e);                         // [1, w]
}

nx::Tensor ApplyResidualBlock(const nx::Tensor& x, const ResidualBlock& block) {
  nx::Tensor inner = nx::Tanh(nx::Add(nx::MatMul(x, block.a1), block.b1));
  return nx::Add(x, nx::Add(nx::MatMul(inner, block.a2), block.b2));
}

nx::Tensor EmbedUser(const UserInput& user, const UserTowerParams& params) {
  nx::Tensor history = EncodeHistory(user.history, params);
  nx::Tensor joined = history;
  if (params.feature_w.size() > 0) {
    if (user.features.size() != params.feature_w.rows()) {
      throw ShapeError("user feature vector has " +
                       std::to_string(user.features.size()) +
                       " entries, tower expects " +
                       std::to_string(params.feature_w.rows()));
    }
    nx::Tensor x = nx::Tensor::Matrix(1, user.features.size(), user.features);
    nx::Tensor f = nx::Tanh(nx::Add(nx::MatMul(x, params.feature_w),
                                    params.feature_b));
    joined = nx::Concat({history, f});
  }
  nx::Tensor u = nx::Add(nx::MatMul(joined, params.input_w), params.input_b);
  for (const auto& block : params.blocks) u = ApplyResidualBlock(u, block);
  return u;
}

}  // namespace twintower::model
