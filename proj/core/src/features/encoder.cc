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

#include "twintower/features/encoder.h"

#include <algorithm>
#include <set>

namespace twintower::features {

ItemFeatureEncoder::ItemFeatureEncoder(CategoricalSchema schema,
                                       WordVectorTable words,
                                       CoverArtStore coverart)
    : schema_(std::move(schema)),
      words_(std::move(words)),
      coverart_(std::move(coverart)) {}

EncodedItemFeatures ItemFeatureEncoder::Encode(
    const ItemMetadataRecord& record,
    std::optional<std::size_t> id_index) const {
  EncodedItemFeatures f;
  f.categorical = schema_.Encode(record);
  f.synopsis = EncodeSynopsis(record.synopsis, words_);
  auto art = coverart_.Get(record.item_id);
  f.coverart = std::move(art.vector);
  f.coverart_missing = art.missing;
  f.id_index = id_index;
  return f;
}

UserFeatureSchema UserFeatureSchema::Build(std::span<const UserProfile> users) {
  std::map<std::string, std::set<std::string>> values;
  for (const auto& u : users) {
    for (const auto& [name, value] : u.features) values[name].insert(value);
  }
  UserFeatureSchema s;
  for (auto& [name, set] : values) {
    s.vocab_[name] = std::vector<std::string>(set.begin(), set.end());
  }
  s.Layout();
  return s;
}

void UserFeatureSchema::Layout() {
  offsets_.clear();
  dimension_ = 0;
  for (const auto& [name, values] : vocab_) {
    offsets_[name] = dimension_;
    dimension_ += values.size();
  }
}

std::vector<double> UserFeatureSchema::Encode(
    const std::map<std::string, std::string>& features) const {
  std::vector<double> out(dimension_, 0.0);
  for (const auto& [name, value] : features) {
    auto it = vocab_.find(name);
    if (it == vocab_.end()) continue;
    auto pos = std::lower_bound(it->second.begin(), it->second.end(), value);
    if (pos == it->second.end() || *pos != value) continue;
    out[offsets_.at(name) +
        static_cast<std::size_t>(pos - it->second.begin())] = 1.0;
  }
  return out;
}

nlohmann::json UserFeatureSchema::ToJson() const { return vocab_; }

UserFeatureSchema UserFeatureSchema::FromJson(const nlohmann::json& j) {
  UserFeatureSchema s;
  s.vocab_ = j.get<std::map<std::string, std::vector<std::string>>>();
  for (auto& [name, values] : s.vocab_) std::sort(values.begin(), values.end());
  s.Layout();
  return s;
}

}  // namespace twintower::features
