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

#include "twintower/model/parameters.h"

#include <algorithm>
#include <random>

#include "twintower/error.h"
#include "twintower/util/digest.h"

namespace twintower::model {

numerics::Tensor ParameterSet::Add(const std::string& name,
                                   numerics::Shape shape) {
  if (Contains(name)) throw Error("duplicate parameter '" + name + "'");
  auto t = numerics::Tensor::Zeros(std::move(shape), /*requires_grad=*/true);
  entries_.push_back({name, t});
  return t;
}

void ParameterSet::InitUniform(std::uint64_t seed, double half_range) {
  std::uniform_real_distribution<double> dist(-half_range, half_range);
  for (auto& e : entries_) {
    std::mt19937_64 rng(seed ^ util::Fnv1a64(e.name));
    for (double& v : e.tensor.mutable_values()) v = dist(rng);
  }
}

const numerics::Tensor& ParameterSet::Get(const std::string& name) const {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const NamedTensor& e) { return e.name == name; });
  if (it == entries_.end()) throw Error("no parameter named '" + name + "'");
  return it->tensor;
}

bool ParameterSet::Contains(const std::string& name) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const NamedTensor& e) { return e.name == name; });
}

std::size_t ParameterSet::TotalSize() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.tensor.size();
  return n;
}

void ParameterSet::ZeroGrad() {
  for (auto& e : entries_) e.tensor.ZeroGrad();
}

}  // namespace twintower::model
