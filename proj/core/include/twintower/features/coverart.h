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

#ifndef TWINTOWER_FEATURES_COVERART_H_
#define TWINTOWER_FEATURES_COVERART_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace twintower::features {

// Penultimate-layer width of the frozen 34-layer residual image network.
inline constexpr std::size_t kDefaultCoverArtDimension = 512;

// Precomputed cover-art activations keyed by item id.
class CoverArtStore {
 public:
  explicit CoverArtStore(std::size_t dimension = kDefaultCoverArtDimension);

  // Throws InputError on a dimension mismatch.
  void Ingest(const std::string& item_id, std::vector<double> vector);

  struct Lookup {
    std::vector<double> vector;  // zeros when missing
    bool missing = true;
  };
  Lookup Get(const std::string& item_id) const;

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return vectors_.size(); }
  const std::map<std::string, std::vector<double>>& entries() const {
    return vectors_;
  }

 private:
  std::size_t dimension_;
  std::map<std::string, std::vector<double>> vectors_;
};

// Deterministic stand-in embedding: a unit vector drawn from a generator
// seeded by a hash of (seed, item id).
std::vector<double> PseudoCoverArt(std::string_view item_id,
                                   std::uint64_t seed,
                                   std::size_t dimension = kDefaultCoverArtDimension);

}  // namespace twintower::features

#endif  // TWINTOWER_FEATURES_COVERART_H_
