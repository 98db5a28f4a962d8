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

// On-disk dataset layout (all paths overridable):
//
//   metadata.jsonl      one item record per line
//   interactions.jsonl  {"user_id": ..., "item_id": ..., "ts": seconds}
//   users.jsonl         {"user_id": ..., "features": {"country": ...}}
//   word_vectors.txt    "<vocab_size> <dim>" header, then token rows
//   coverart.jsonl      {"item_id": ..., "vector": [...]}   (optional)

#ifndef TWINTOWER_DATA_DATASET_H_
#define TWINTOWER_DATA_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twintower/features/coverart.h"
#include "twintower/features/records.h"
#include "twintower/features/text.h"

namespace twintower::data {

struct Interaction {
  std::string user_id;
  std::string item_id;
  std::int64_t ts = 0;  // seconds since epoch

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

using InteractionLog = std::vector<Interaction>;

struct Dataset {
  std::vector<ItemMetadataRecord> items;
  std::vector<UserProfile> users;
  InteractionLog interactions;
  features::WordVectorTable words;
  features::CoverArtStore coverart;
};

struct DatasetPaths {
  std::filesystem::path metadata;
  std::filesystem::path interactions;
  std::filesystem::path users;
  std::filesystem::path word_vectors;
  std::filesystem::path coverart;  // empty: no cover-art file

  static DatasetPaths InDirectory(const std::filesystem::path& dir);
};

struct IngestReport {
  std::size_t interactions_read = 0;
  std::size_t dropped_unknown_item = 0;
  std::size_t dropped_unknown_user = 0;
  std::size_t coverart_unknown_item = 0;

  nlohmann::json ToJson() const;
};

// Parses and joins every file. Malformed lines raise InputError naming the
// file and line; rows referencing unknown users or items are dropped and
// counted in `report`.
Dataset Ingest(const DatasetPaths& paths, IngestReport* report = nullptr);

// Writes the layout above into `dir`, creating it if needed.
void WriteDataset(const Dataset& dataset, const std::filesystem::path& dir);

// #watches / (#users * #items).
double Density(std::size_t watches, std::size_t users, std::size_t items);

nlohmann::json ItemToJson(const ItemMetadataRecord& item);
ItemMetadataRecord ItemFromJson(const nlohmann::json& j);

}  // namespace twintower::data

#endif  // TWINTOWER_DATA_DATASET_H_
