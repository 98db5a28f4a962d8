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

#include "twintower/training/corpus.h"

#include <algorithm>
#include <set>
#include <tuple>
#include <unordered_map>

#include "twintower/error.h"
#include "twintower/util/digest.h"

namespace twintower::training {
namespace {

std::vector<std::size_t> SortedUnique(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

PreparedCorpus PreparedCorpus::Build(const data::Dataset& dataset,
                                     const eval::SplitConfig& split,
                                     const features::SchemaConfig& schema) {
  split.Validate();
  PreparedCorpus c;
  c.split_ = split;
  c.items_ = dataset.items;
  for (std::size_t i = 0; i < c.items_.size(); ++i) {
    c.index_[c.items_[i].item_id] = i;
  }
  c.schema_ = features::CategoricalSchema::Build(c.items_, schema);
  c.user_schema_ = features::UserFeatureSchema::Build(dataset.users);

  data::InteractionLog log = dataset.interactions;
  std::stable_sort(log.begin(), log.end(),
                   [](const data::Interaction& a, const data::Interaction& b) {
                     return std::tie(a.ts, a.item_id) < std::tie(b.ts, b.item_id);
                   });
  eval::SplitLog windows = eval::TemporalSplit(log, split);

  // ID rows: items watched in X or Y, in item_id order (index_ is sorted).
  std::set<std::size_t> warm_set;
  for (const auto* part : {&windows.train_input, &windows.train_label}) {
    for (const auto& row : *part) {
      auto it = c.index_.find(row.item_id);
      if (it != c.index_.end()) warm_set.insert(it->second);
    }
  }
  std::vector<std::optional<std::size_t>> id_row(c.items_.size());
  for (const auto& [id, pos] : c.index_) {
    if (warm_set.contains(pos)) {
      id_row[pos] = c.warm_.size();
      c.warm_.push_back(pos);
    }
  }
  if (c.warm_.empty()) {
    throw InputError("no item has a watch in the training windows");
  }

  eval::ItemSetByCategory cold =
      eval::ColdStartItems(log, split, c.items_);
  for (const auto& [category, ids] : cold) {
    auto& out = c.cold_[category];
    for (const auto& id : ids) out.push_back(c.index_.at(id));
  }

  features::WordVectorTable words = dataset.words;
  std::vector<std::string> synopses;
  synopses.reserve(c.items_.size());
  for (const auto& item : c.items_) synopses.push_back(item.synopsis);
  words.FitDocumentFrequencies(synopses);
  c.synopsis_dim_ = words.dimension();
  c.coverart_dim_ = dataset.coverart.dimension();
  features::ItemFeatureEncoder encoder(c.schema_, std::move(words),
                                       dataset.coverart);
  c.encoded_.reserve(c.items_.size());
  for (std::size_t i = 0; i < c.items_.size(); ++i) {
    c.encoded_.push_back(encoder.Encode(c.items_[i], id_row[i]));
  }

  std::unordered_map<std::string, std::size_t> user_index;
  c.users_.reserve(dataset.users.size());
  for (const auto& profile : dataset.users) {
    user_index[profile.user_id] = c.users_.size();
    UserRecord u;
    u.user_id = profile.user_id;
    u.features = c.user_schema_.Encode(profile.features);
    c.users_.push_back(std::move(u));
  }
  auto for_rows = [&](const data::InteractionLog& rows, auto&& fn) {
    for (const auto& row : rows) {
      auto u = user_index.find(row.user_id);
      auto i = c.index_.find(row.item_id);
      if (u == user_index.end() || i == c.index_.end()) continue;
      fn(c.users_[u->second], i->second);
    }
  };
  for_rows(windows.train_input, [&](UserRecord& u, std::size_t item) {
    u.train_history.push_back(*id_row[item]);
    u.watched.push_back(item);
  });
  for_rows(windows.train_label, [&](UserRecord& u, std::size_t item) {
    u.positives.push_back(item);
    u.watched.push_back(item);
  });
  // X' may reach outside X and Y under a custom split; items without an ID
  // row cannot enter the history.
  for_rows(windows.score_input, [&](UserRecord& u, std::size_t item) {
    if (id_row[item]) u.score_history.push_back(*id_row[item]);
    u.score_seen.push_back(item);
  });
  for_rows(windows.score_label, [&](UserRecord& u, std::size_t item) {
    u.labels.push_back(item);
  });
  std::size_t training_watches = 0;
  for (auto& u : c.users_) {
    training_watches += u.watched.size();
    // Positives keep first-watch order; repeats add nothing.
    std::vector<std::size_t> unique;
    std::set<std::size_t> seen;
    for (std::size_t p : u.positives) {
      if (seen.insert(p).second) unique.push_back(p);
    }
    u.positives = std::move(unique);
    u.watched = SortedUnique(std::move(u.watched));
    u.score_seen = SortedUnique(std::move(u.score_seen));
    u.labels = SortedUnique(std::move(u.labels));
  }
  c.training_density_ =
      data::Density(training_watches, c.users_.size(), c.items_.size());
  return c;
}

std::vector<std::string> PreparedCorpus::id_item_ids() const {
  std::vector<std::string> out;
  out.reserve(warm_.size());
  for (std::size_t pos : warm_) out.push_back(items_[pos].item_id);
  return out;
}

std::optional<std::size_t> PreparedCorpus::FindItem(
    const std::string& item_id) const {
  auto it = index_.find(item_id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

model::ModelDims PreparedCorpus::dims() const {
  return model::ModelDims{.categorical = schema_.dimension(),
                          .synopsis = synopsis_dim_,
                          .coverart = coverart_dim_,
                          .id_rows = warm_.size(),
                          .user_features = user_schema_.dimension()};
}

std::string PreparedCorpus::SchemaHash() const {
  nlohmann::json j{{"categorical", schema_.ToJson()},
                   {"user_features", user_schema_.ToJson()},
                   {"id_items", id_item_ids()},
                   {"synopsis_dim", synopsis_dim_},
                   {"coverart_dim", coverart_dim_}};
  return util::Sha256Hex(j.dump());
}

}  // namespace twintower::training
