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

#ifndef TWINTOWER_MODEL_PARAMETERS_H_
#define TWINTOWER_MODEL_PARAMETERS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "twintower/numerics/tensor.h"

namespace twintower::model {

struct NamedTensor {
  std::string name;
  numerics::Tensor tensor;
};

// Ordered registry of trainable tensors. Order is creation order and is the
// serialization order of checkpoints.
class ParameterSet {
 public:
  // Registers a zero-filled trainable tensor; names must be unique.
  numerics::Tensor Add(const std::string& name, numerics::Shape shape);

  // Each tensor draws from its own stream seeded by (seed, name), so the
  // values of a tensor do not depend on which other tensors exist.
  void InitUniform(std::uint64_t seed, double half_range);

  const numerics::Tensor& Get(const std::string& name) const;
  bool Contains(const std::string& name) const;
  const std::vector<NamedTensor>& entries() const { return entries_; }
  std::size_t TotalSize() const;
  void ZeroGrad();

 private:
  std::vector<NamedTensor> entries_;
};

}  // namespace twintower::model

#endif  // TWINTOWER_MODEL_PARAMETERS_H_
