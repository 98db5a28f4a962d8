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

#ifndef TWINTOWER_FEATURES_ENCODER_H_
#define TWINTOWER_FEATURES_ENCODER_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twintower/features/categorical.h"
#include "twintower/features/coverart.h"
#include "twintower/features/records.h"
#include "twintower/features/text.h"

namespace twintower::features {

// Dense per-channel inputs of one item. Cold-start items carry no id_index.
struct EncodedItemFeatures {
  std::vector<double> categorical;
  std::vector<double> synopsis;
  std::vector<double> coverart;
  bool coverart_missing = true;
  std::optional<std::size_t> id_index;
};

class ItemFeatureEncoder {
 public:
  ItemFeatureEncoder(CategoricalSchema schema, WordVectorTable words,
                     CoverArtStore coverart);

  EncodedItemFeatures Encode(const ItemMetadataRecord& record,
                             std::optional<std::size_t> id_index) const;

  const CategoricalSchema& schema() const { return schema_; }
  const WordVectorTable& words() const { return words_; }
  const CoverArtStore& coverart() const { return coverart_; }

 private:
  CategoricalSchema schema_;
  WordVectorTable words_;
  CoverArtStore coverart_;
};

// One-hot vocabularies over user-level categorical features, in feature-name
// order. Unknown values encode to zeros.
class UserFeatureSchema {
 public:
  static UserFeatureSchema Build(std::span<const UserProfile> users);

  std::vector<double> Encode(
      const std::map<std::string, std::string>& features) const;
  std::size_t dimension() const { return dimension_; }

  nlohmann::json ToJson() const;
  static UserFeatureSchema FromJson(const nlohmann::json& j);

 private:
  void Layout();

  std::map<std::string, std::vector<std::string>> vocab_;  // sorted values
  std::map<std::string, std::size_t> offsets_;
  std::size_t dimension_ = 0;
};

}  // namespace twintower::features

#endif  // TWINTOWER_FEATURES_ENCODER_H_
