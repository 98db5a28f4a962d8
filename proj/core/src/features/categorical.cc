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

#include "twintower/features/categorical.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <utility>

#include "twintower/error.h"
#include "twintower/util/digest.h"

namespace twintower::features {
namespace {

using Vocabulary = std::map<std::string, std::size_t>;

// Most frequent first, ties lexicographic; truncated to `capacity`.
Vocabulary RankedVocabulary(const std::unordered_map<std::string, std::size_t>& counts,
                            std::size_t capacity) {
  std::vector<std::pair<std::string, std::size_t>> entries(counts.begin(),
                                                           counts.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocabulary vocab;
  for (std::size_t i = 0; i < entries.size() && i < capacity; ++i) {
    vocab.emplace(entries[i].first, i);
  }
  return vocab;
}

void SetSlot(std::vector<double>& out, BlockRange block, const Vocabulary& vocab,
             const std::string& value) {
  auto it = vocab.find(value);
  if (it != vocab.end()) out[block.offset + it->second] = 1.0;
}

// Index into a [min, max] range block whose last slot catches everything
// outside the range.
std::size_t RangeSlot(int value, int min, int max) {
  if (value < min || value > max) return static_cast<std::size_t>(max - min + 1);
  return static_cast<std::size_t>(value - min);
}

nlohmann::json VocabToJson(const Vocabulary& vocab) {
  std::vector<std::string> ordered(vocab.size());
  for (const auto& [token, slot] : vocab) ordered[slot] = token;
  return ordered;
}

}  // namespace

void to_json(nlohmann::json& j, const SchemaConfig& c) {
  j = nlohmann::json{{"genre_slots", c.genre_slots},
                     {"cast_slots", c.cast_slots},
                     {"maturity_slots", c.maturity_slots},
                     {"country_slots", c.country_slots},
                     {"popularity_buckets", c.popularity_buckets}};
}

void from_json(const nlohmann::json& j, SchemaConfig& c) {
  SchemaConfig d;
  c.genre_slots = j.value("genre_slots", d.genre_slots);
  c.cast_slots = j.value("cast_slots", d.cast_slots);
  c.maturity_slots = j.value("maturity_slots", d.maturity_slots);
  c.country_slots = j.value("country_slots", d.country_slots);
  c.popularity_buckets = j.value("popularity_buckets", d.popularity_buckets);
}

std::size_t DiscretizePopularity(std::int64_t views, std::int64_t total_views,
                                 std::size_t buckets) {
  if (total_views <= 0) {
    throw InputError("popularity: total view count must be positive");
  }
  if (views < 0 || views > total_views) {
    throw InputError("popularity: view count " + std::to_string(views) +
                     " outside [0, " + std::to_string(total_views) + "]");
  }
  if (buckets == 0) throw InputError("popularity: bucket count must be >= 1");
  double s = std::log1p(static_cast<double>(views)) /
             std::log1p(static_cast<double>(total_views));
  auto bucket =
      static_cast<std::size_t>(std::floor(s * static_cast<double>(buckets)));
  return std::min(bucket, buckets - 1);
}

CategoricalSchema CategoricalSchema::Build(
    std::span<const ItemMetadataRecord> corpus, const SchemaConfig& config) {
  if (corpus.empty()) throw InputError("cannot build schema from empty corpus");
  if (config.popularity_buckets == 0) {
    throw InputError("popularity bucket count must be >= 1");
  }
  std::unordered_map<std::string, std::size_t> genres, cast, maturity, country;
  CategoricalSchema s;
  s.config_ = config;
  s.year_min_ = std::numeric_limits<int>::max();
  s.year_max_ = std::numeric_limits<int>::min();
  s.month_min_ = std::numeric_limits<int>::max();
  s.month_max_ = std::numeric_limits<int>::min();
  std::int64_t long_total = 0, recent_total = 0;
  for (const auto& r : corpus) {
    for (const auto& g : r.genres) ++genres[g];
    for (const auto& c : r.cast) ++cast[c];
    if (!r.maturity.empty()) ++maturity[r.maturity];
    if (!r.country.empty()) ++country[r.country];
    s.year_min_ = std::min(s.year_min_, r.release_year);
    s.year_max_ = std::max(s.year_max_, r.release_year);
    s.month_min_ = std::min(s.month_min_, r.acquisition_month.Index());
    s.month_max_ = std::max(s.month_max_, r.acquisition_month.Index());
    long_total += r.view_count_long;
    recent_total += r.view_count_recent;
  }
  s.genre_ = RankedVocabulary(genres, config.genre_slots);
  s.cast_ = RankedVocabulary(cast, config.cast_slots);
  s.maturity_ = RankedVocabulary(maturity, config.maturity_slots);
  s.country_ = RankedVocabulary(country, config.country_slots);
  // An all-zero corpus still needs a positive normaliser; every item then
  // lands in bucket 0.
  s.total_views_long_ = std::max<std::int64_t>(long_total, 1);
  s.total_views_recent_ = std::max<std::int64_t>(recent_total, 1);

  std::size_t widths[kNumCategoricalBlocks] = {
      config.genre_slots,
      config.cast_slots,
      config.maturity_slots,
      config.country_slots,
      static_cast<std::size_t>(s.year_max_ - s.year_min_ + 2),
      static_cast<std::size_t>(s.month_max_ - s.month_min_ + 2),
      config.popularity_buckets,
      config.popularity_buckets,
  };
  std::size_t offset = 0;
  for (std::size_t b = 0; b < kNumCategoricalBlocks; ++b) {
    s.blocks_[b] = BlockRange{offset, widths[b]};
    offset += widths[b];
  }
  s.dimension_ = offset;
  return s;
}

std::vector<double> CategoricalSchema::Encode(
    const ItemMetadataRecord& record) const {
  std::vector<double> out(dimension_, 0.0);
  for (const auto& g : record.genres) {
    SetSlot(out, block(CategoricalBlock::kGenre), genre_, g);
  }
  for (const auto& c : record.cast) {
    SetSlot(out, block(CategoricalBlock::kCast), cast_, c);
  }
  SetSlot(out, block(CategoricalBlock::kMaturity), maturity_, record.maturity);
  SetSlot(out, block(CategoricalBlock::kCountry), country_, record.country);
  out[block(CategoricalBlock::kReleaseYear).offset +
      RangeSlot(record.release_year, year_min_, year_max_)] = 1.0;
  out[block(CategoricalBlock::kAcquisitionMonth).offset +
      RangeSlot(record.acquisition_month.Index(), month_min_, month_max_)] = 1.0;
  // Counts beyond the corpus total (items added after the schema was built)
  // saturate in the top bucket.
  auto bucket = [&](std::int64_t views, std::int64_t total) {
    views = std::clamp<std::int64_t>(views, 0, total);
    return DiscretizePopularity(views, total, config_.popularity_buckets);
  };
  out[block(CategoricalBlock::kPopularityLong).offset +
      bucket(record.view_count_long, total_views_long_)] = 1.0;
  out[block(CategoricalBlock::kPopularityRecent).offset +
      bucket(record.view_count_recent, total_views_recent_)] = 1.0;
  return out;
}

std::size_t CategoricalSchema::live_slots(CategoricalBlock b) const {
  switch (b) {
    case CategoricalBlock::kGenre: return genre_.size();
    case CategoricalBlock::kCast: return cast_.size();
    case CategoricalBlock::kMaturity: return maturity_.size();
    case CategoricalBlock::kCountry: return country_.size();
    default: return block(b).width;
  }
}

nlohmann::json CategoricalSchema::ToJson() const {
  return nlohmann::json{
      {"config", config_},
      {"genre", VocabToJson(genre_)},
      {"cast", VocabToJson(cast_)},
      {"maturity", VocabToJson(maturity_)},
      {"country", VocabToJson(country_)},
      {"release_year", {year_min_, year_max_}},
      {"acquisition_month",
       {YearMonth::FromIndex(month_min_).ToString(),
        YearMonth::FromIndex(month_max_).ToString()}},
      {"total_views", {total_views_long_, total_views_recent_}},
  };
}

std::string CategoricalSchema::Hash() const {
  return util::Sha256Hex(ToJson().dump());
}

}  // namespace twintower::features
