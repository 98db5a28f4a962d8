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

// Seeded synthetic corpora with preferences planted in genre space.
//
// Every item has one primary genre (assigned round-robin within its
// category, so genres are balanced) plus one subgenre tag. Each user has a
// favourite genre; the chance of watching an item is proportional to
// 1 + sharpness * [item genre == favourite]. Cast and synopsis words are
// drawn partly from genre-specific pools, and genre words share a centroid
// in word-vector space, so the categorical and synopsis channels both carry
// the planted signal. Cover art mixes a per-genre direction into a
// pseudo-random unit vector; with coverart_signal = 0 it is pure noise.
//
// Cold-start items receive watches only inside the scoring label window,
// and warm items only reach that window after an earlier watch, so the
// generated cold set is exactly the designated one.

#ifndef TWINTOWER_DATA_SYNTHETIC_H_
#define TWINTOWER_DATA_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "twintower/data/dataset.h"
#include "twintower/eval/split.h"

namespace twintower::data {

struct SyntheticSpec {
  std::size_t users = 500;
  std::size_t items = 300;
  std::size_t genres = 6;
  // 0 gives uniform preferences.
  double preference_sharpness = 50.0;
  // Mean watches per user before the scoring label window.
  double watch_intensity = 60.0;
  // Mean watches per user inside the scoring label window.
  double label_window_intensity = 3.0;
  double cold_start_fraction = 0.1;
  // Relative appeal of a cold item inside the scoring label window.
  double cold_novelty = 3.0;
  // Weight of the genre direction in each cover-art vector, in [0, 1].
  double coverart_signal = 0.3;
  std::size_t countries = 10;
  std::size_t word_dimension = 300;
  std::size_t coverart_dimension = 512;
  int input_days = 300;
  int train_label_days = 14;
  int score_label_days = 7;
  std::uint64_t seed = 7;

  eval::SplitConfig Split() const;
};

void to_json(nlohmann::json& j, const SyntheticSpec& s);
void from_json(const nlohmann::json& j, SyntheticSpec& s);

struct SyntheticCorpus {
  Dataset dataset;
  eval::SplitConfig split;
  std::set<std::string> cold_items;
  // Primary genre index per item id and favourite genre per user id.
  std::map<std::string, std::size_t> item_genre;
  std::map<std::string, std::size_t> user_favourite;
  nlohmann::json report;  // counts and training density
};

SyntheticCorpus GenerateSynthetic(const SyntheticSpec& spec);

}  // namespace twintower::data

#endif  // TWINTOWER_DATA_SYNTHETIC_H_
