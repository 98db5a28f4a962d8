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

// Temporal windows.
//
//   train_input  (X)   history fed to the user tower during training
//   train_label  (Y)   positives for training; starts where X ends
//   score_input  (X')  history fed to the user tower when scoring
//   score_label  (Y')  ground truth; starts where X' ends and never
//                      overlaps X or Y
//
// All windows are half-open [begin, end) in seconds since epoch.

#ifndef TWINTOWER_EVAL_SPLIT_H_
#define TWINTOWER_EVAL_SPLIT_H_

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "twintower/data/dataset.h"
#include "twintower/features/records.h"

namespace twintower::eval {

inline constexpr std::int64_t kSecondsPerDay = 86400;
// 2020-01-01T00:00:00Z, origin of synthetic timelines.
inline constexpr std::int64_t kSyntheticEpoch = 1577836800;

struct Window {
  std::int64_t begin = 0;
  std::int64_t end = 0;

  bool Contains(std::int64_t ts) const { return ts >= begin && ts < end; }
  bool Overlaps(const Window& o) const { return begin < o.end && o.begin < end; }
  friend bool operator==(const Window&, const Window&) = default;
};

struct SplitConfig {
  Window train_input;
  Window train_label;
  Window score_input;
  Window score_label;

  // Desk-scale layout starting at `origin`: X is `input_days` long, Y
  // `train_label_days`, X' is the `input_days` ending where Y ends, and Y'
  // the following `score_label_days`.
  static SplitConfig Days(std::int64_t origin = kSyntheticEpoch,
                          int input_days = 300, int train_label_days = 14,
                          int score_label_days = 7);

  // Throws InputError when a window is empty, Y does not follow X, Y' does
  // not follow X', or Y' overlaps X or Y.
  void Validate() const;

  friend bool operator==(const SplitConfig&, const SplitConfig&) = default;
};

void to_json(nlohmann::json& j, const SplitConfig& s);
void from_json(const nlohmann::json& j, SplitConfig& s);

struct SplitLog {
  data::InteractionLog train_input;
  data::InteractionLog train_label;
  data::InteractionLog score_input;
  data::InteractionLog score_label;
};

// Each interaction goes to every window containing its timestamp. Validates
// the configuration first.
SplitLog TemporalSplit(const data::InteractionLog& log,
                       const SplitConfig& split);

using ItemSetByCategory = std::map<ItemCategory, std::set<std::string>>;

// Items with no watch in X, Y or X' and at least one watch in Y', grouped by
// category. Items missing from `items` are ignored.
ItemSetByCategory ColdStartItems(const data::InteractionLog& log,
                                 const SplitConfig& split,
                                 std::span<const ItemMetadataRecord> items);

}  // namespace twintower::eval

#endif  // TWINTOWER_EVAL_SPLIT_H_
