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

// A dataset joined with its temporal split and encoded once.
//
// Items are addressed by their position in the metadata list. Warm items
// (watched at least once in X or Y) own an ID row; rows are assigned in
// item_id order so they do not depend on file order.

#ifndef TWINTOWER_TRAINING_CORPUS_H_
#define TWINTOWER_TRAINING_CORPUS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twintower/data/dataset.h"
#include "twintower/eval/split.h"
#include "twintower/features/categorical.h"
#include "twintower/features/encoder.h"
#include "twintower/model/two_tower.h"

namespace twintower::training {

struct UserRecord {
  std::string user_id;
  std::vector<double> features;
  std::vector<std::size_t> train_history;  // ID rows watched in X, oldest first
  std::vector<std::size_t> score_history;  // ID rows watched in X'
  std::vector<std::size_t> positives;      // items watched in Y, unique
  std::vector<std::size_t> watched;        // items watched in X or Y, sorted
  std::vector<std::size_t> score_seen;     // items watched in X', sorted
  std::vector<std::size_t> labels;         // items watched in Y', sorted
};

class PreparedCorpus {
 public:
  // Document frequencies for the synopsis channel are fitted over every
  // synopsis in the metadata.
  static PreparedCorpus Build(const data::Dataset& dataset,
                              const eval::SplitConfig& split,
                              const features::SchemaConfig& schema = {});

  const std::vector<ItemMetadataRecord>& items() const { return items_; }
  const std::vector<features::EncodedItemFeatures>& encoded() const {
    return encoded_;
  }
  const std::vector<UserRecord>& users() const { return users_; }
  // Item position of each ID row.
  const std::vector<std::size_t>& warm_items() const { return warm_; }
  std::vector<std::string> id_item_ids() const;
  // Item positions of cold-start items, per category, in item_id order.
  const std::map<ItemCategory, std::vector<std::size_t>>& cold_items() const {
    return cold_;
  }
  std::optional<std::size_t> FindItem(const std::string& item_id) const;

  const eval::SplitConfig& split() const { return split_; }
  const features::CategoricalSchema& schema() const { return schema_; }
  const features::UserFeatureSchema& user_schema() const {
    return user_schema_;
  }
  model::ModelDims dims() const;
  // Watches in X and Y over (#users * #items).
  double training_density() const { return training_density_; }

  // Digest of the categorical schema, user feature schema and ID rows; a
  // checkpoint can only be scored against a corpus with the same digest.
  std::string SchemaHash() const;

 private:
  PreparedCorpus() = default;

  std::vector<ItemMetadataRecord> items_;
  std::map<std::string, std::size_t> index_;
  std::vector<features::EncodedItemFeatures> encoded_;
  std::vector<UserRecord> users_;
  std::vector<std::size_t> warm_;
  std::map<ItemCategory, std::vector<std::size_t>> cold_;
  eval::SplitConfig split_;
  features::CategoricalSchema schema_;
  features::UserFeatureSchema user_schema_;
  std::size_t synopsis_dim_ = 0;
  std::size_t coverart_dim_ = 0;
  double training_density_ = 0.0;
};

}  // namespace twintower::training

#endif  // TWINTOWER_TRAINING_CORPUS_H_
