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

#ifndef TWINTOWER_FEATURES_RECORDS_H_
#define TWINTOWER_FEATURES_RECORDS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twintower {

enum class ItemCategory { kMovie, kSeries };

inline constexpr ItemCategory kAllCategories[] = {ItemCategory::kMovie,
                                                  ItemCategory::kSeries};

std::string_view CategoryName(ItemCategory category);
// Accepts "movie" and "series"; throws InputError otherwise.
ItemCategory ParseCategory(std::string_view name);

struct YearMonth {
  int year = 1970;
  int month = 1;  // 1..12

  // Months since year 0; consecutive months differ by one.
  int Index() const { return year * 12 + (month - 1); }
  std::string ToString() const;  // "YYYY-MM"
  static YearMonth Parse(std::string_view text);
  static YearMonth FromIndex(int index);

  friend bool operator==(const YearMonth&, const YearMonth&) = default;
};

// Raw per-title metadata, one line of the metadata JSON-lines file.
struct ItemMetadataRecord {
  std::string item_id;
  ItemCategory category = ItemCategory::kMovie;
  std::vector<std::string> genres;
  std::vector<std::string> cast;
  std::string maturity;
  std::string country;
  int release_year = 2000;
  YearMonth acquisition_month;
  std::int64_t view_count_long = 0;
  std::int64_t view_count_recent = 0;
  std::string synopsis;
  std::optional<std::vector<double>> coverart_vector;

  friend bool operator==(const ItemMetadataRecord&,
                         const ItemMetadataRecord&) = default;
};

struct UserProfile {
  std::string user_id;
  // Categorical user-level features; "country" is required.
  std::map<std::string, std::string> features;

  friend bool operator==(const UserProfile&, const UserProfile&) = default;
};

}  // namespace twintower

#endif  // TWINTOWER_FEATURES_RECORDS_H_
