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

#include "twintower/features/coverart.h"

#include <cmath>
#include <random>

#include "twintower/error.h"
#include "twintower/util/digest.h"

namespace twintower::features {

CoverArtStore::CoverArtStore(std::size_t dimension) : dimension_(dimension) {}

void CoverArtStore::Ingest(const std::string& item_id,
                           std::vector<double> vector) {
  if (vector.size() != dimension_) {
    throw InputError("cover art for '" + item_id + "' has dimension " +
                     std::to_string(vector.size()) + ", expected " +
                     std::to_string(dimension_));
  }
  vectors_.insert_or_assign(item_id, std::move(vector));
}

CoverArtStore::Lookup CoverArtStore::Get(const std::string& item_id) const {
  auto it = vectors_.find(item_id);
  if (it == vectors_.end()) {
    return Lookup{std::vector<double>(dimension_, 0.0), true};
  }
  return Lookup{it->second, false};
}

std::vector<double> PseudoCoverArt(std::string_view item_id,
                                   std::uint64_t seed, std::size_t dimension) {
  std::mt19937_64 rng(util::Fnv1a64(item_id) ^ (seed * 0x9E3779B97F4A7C15ULL));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dimension);
  double norm = 0.0;
  for (double& x : v) {
    x = normal(rng);
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace twintower::features
