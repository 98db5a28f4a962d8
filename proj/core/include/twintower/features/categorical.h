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

// Multi-hot encoding of the categorical metadata block.
//
// Block order is fixed: genre, cast, maturity, country, release year,
// acquisition month, long-window popularity, recent-window popularity.
// Vocabulary blocks have a fixed capacity; a value outside the vocabulary
// contributes nothing. Year and month blocks span the corpus range plus one
// trailing out-of-range slot.

#ifndef TWINTOWER_FEATURES_CATEGORICAL_H_
#define TWINTOWER_FEATURES_CATEGORICAL_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twintower/features/records.h"

namespace twintower::features {

struct SchemaConfig {
  std::size_t genre_slots = 254;  // 27 genres + 227 subgenres
  std::size_t cast_slots = 2000;
  std::size_t maturity_slots = 17;
  std::size_t country_slots = 159;
  std::size_t popularity_buckets = 10;

  friend bool operator==(const SchemaConfig&, const SchemaConfig&) = default;
};

void to_json(nlohmann::json& j, const SchemaConfig& c);
void from_json(const nlohmann::json& j, SchemaConfig& c);

enum class CategoricalBlock {
  kGenre,
  kCast,
  kMaturity,
  kCountry,
  kReleaseYear,
  kAcquisitionMonth,
  kPopularityLong,
  kPopularityRecent,
};

inline constexpr std::size_t kNumCategoricalBlocks = 8;

struct BlockRange {
  std::size_t offset = 0;
  std::size_t width = 0;
};

// Bucket of log(1+views)/log(1+total_views) under uniform discretisation.
// Throws InputError when total_views is zero or smaller than views.
std::size_t DiscretizePopularity(std::int64_t views, std::int64_t total_views,
                                 std::size_t buckets);

class CategoricalSchema {
 public:
  // Throws InputError on an empty corpus.
  static CategoricalSchema Build(std::span<const ItemMetadataRecord> corpus,
                                 const SchemaConfig& config = {});

  std::vector<double> Encode(const ItemMetadataRecord& record) const;

  std::size_t dimension() const { return dimension_; }
  BlockRange block(CategoricalBlock b) const {
    return blocks_[static_cast<std::size_t>(b)];
  }
  const SchemaConfig& config() const { return config_; }

  // Number of vocabulary entries actually populated for a block.
  std::size_t live_slots(CategoricalBlock b) const;

  // Canonical JSON of every vocabulary and range; Hash() digests it.
  nlohmann::json ToJson() const;
  std::string Hash() const;

 private:
  SchemaConfig config_;
  std::map<std::string, std::size_t> genre_;
  std::map<std::string, std::size_t> cast_;
  std::map<std::string, std::size_t> maturity_;
  std::map<std::string, std::size_t> country_;
  int year_min_ = 0;
  int year_max_ = 0;
  int month_min_ = 0;
  int month_max_ = 0;
  std::int64_t total_views_long_ = 1;
  std::int64_t total_views_recent_ = 1;
  BlockRange blocks_[kNumCategoricalBlocks];
  std::size_t dimension_ = 0;
};

}  // namespace twintower::features

#endif  // TWINTOWER_FEATURES_CATEGORICAL_H_
