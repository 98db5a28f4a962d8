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

// User tower.
//
// The watch history is pooled by a position-aware attention layer: each
// entry is e_j = itemEmb(item_j) + posEmb(position_j), scored by a single
// learned query s_j = q . tanh(e_j) and averaged with softmax(s) weights.
// Positions count back from the most recent watch (0 = newest). User-level
// features go through a one-layer tanh perceptron. Both parts are
// concatenated, projected to the embedding width d and passed through
// residual blocks x + A2 tanh(A1 x + b1) + b2.

#ifndef TWINTOWER_MODEL_USER_TOWER_H_
#define TWINTOWER_MODEL_USER_TOWER_H_

#include <cstddef>
#include <span>
#include <vector>

#include "twintower/numerics/tensor.h"

namespace twintower::model {

struct ResidualBlock {
  numerics::Tensor a1, b1, a2, b2;  // [d,d], [d], [d,d], [d]
};

struct UserTowerParams {
  numerics::Tensor history_table;  // aliases the item ID table when tied
  numerics::Tensor position_table;  // [L, w]
  numerics::Tensor query;           // [1, w]
  numerics::Tensor feature_w;       // [F, f]; empty when F == 0
  numerics::Tensor feature_b;       // [f]
  numerics::Tensor input_w;         // [w + f, d]
  numerics::Tensor input_b;         // [d]
  std::vector<ResidualBlock> blocks;
};

struct UserInput {
  std::vector<std::size_t> history;  // ID rows, oldest first, at most L
  std::vector<double> features;      // encoded user-level features
};

// Keeps the `max_length` most recent entries.
std::vector<std::size_t> TruncateHistory(std::span<const std::size_t> rows,
                                         std::size_t max_length);

// [1, w]; zeros for an empty history.
numerics::Tensor EncodeHistory(std::span<const std::size_t> history,
                               const UserTowerParams& params);

numerics::Tensor ApplyResidualBlock(const numerics::Tensor& x,
                                    const ResidualBlock& block);

// [1, d].
numerics::Tensor EmbedUser(const UserInput& user,
                           const UserTowerParams& params);

}  // namespace twintower::model

#endif  // TWINTOWER_MODEL_USER_TOWER_H_
