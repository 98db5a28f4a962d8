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

#include "twintower/eval/split.h"

#include <unordered_map>
#include <unordered_set>

#include "twintower/error.h"

namespace twintower::eval {

SplitConfig SplitConfig::Days(std::int64_t origin, int input_days,
                              int train_label_days, int score_label_days) {
  auto day = [origin](std::int64_t d) { return origin + d * kSecondsPerDay; };
  SplitConfig s;
  s.train_input = {day(0), day(input_days)};
  s.train_label = {day(input_days), day(input_days + train_label_days)};
  s.score_input = {day(train_label_days), day(input_days + train_label_days)};
  s.score_label = {day(input_days + train_label_days),
                   day(input_days + train_label_days + score_label_days)};
  return s;
}

void SplitConfig::Validate() const {
  for (const Window* w : {&train_input, &train_label, &score_input, &score_label}) {
    if (w->end <= w->begin) throw InputError("split window is empty");
  }
  if (train_label.begin != train_input.end) {
    throw InputError("training label window must start where X ends");
  }
  if (score_label.begin != score_input.end) {
    throw InputError("scoring label window must start where X' ends");
  }
  if (score_label.Overlaps(train_input) || score_label.Overlaps(train_label)) {
    throw InputError("scoring label window overlaps the training windows");
  }
}

namespace {

nlohmann::json WindowJson(const Window& w) { return {w.begin, w.end}; }

Window WindowFrom(const nlohmann::json& j) {
  return Window{j.at(0).get<std::int64_t>(), j.at(1).get<std::int64_t>()};
}

}  // namespace

void to_json(nlohmann::json& j, const SplitConfig& s) {
  j = nlohmann::json{{"train_input", WindowJson(s.train_input)},
                     {"train_label", WindowJson(s.train_label)},
                     {"score_input", WindowJson(s.score_input)},
                     {"score_label", WindowJson(s.score_label)}};
}

void from_json(const nlohmann::json& j, SplitConfig& s) {
  s.train_input = WindowFrom(j.at("train_input"));
  s.train_label = WindowFrom(j.at("train_label"));
  s.score_input = WindowFrom(j.at("score_input"));
  s.score_label = WindowFrom(j.at("score_label"));
}

SplitLog TemporalSplit(const data::InteractionLog& log,
                       const SplitConfig& split) {
  split.Validate();
  SplitLog out;
  for (const auto& row : log) {
    if (split.train_input.Contains(row.ts)) out.train_input.push_back(row);
    if (split.train_label.Contains(row.ts)) out.train_label.push_back(row);
    if (split.score_input.Contains(row.ts)) out.score_input.push_back(row);
    if (split.score_label.Contains(row.ts)) out.score_label.push_back(row);
  }
  return out;
}

ItemSetByCategory ColdStartItems(const data::InteractionLog& log,
                                 const SplitConfig& split,
                                 std::span<const ItemMetadataRecord> items) {
  split.Validate();
  std::unordered_set<std::string> seen_before, seen_after;
  for (const auto& row : log) {
    if (split.train_input.Contains(row.ts) ||
        split.train_label.Contains(row.ts) ||
        split.score_input.Contains(row.ts)) {
      seen_before.insert(row.item_id);
    }
    if (split.score_label.Contains(row.ts)) seen_after.insert(row.item_id);
  }
  ItemSetByCategory out;
  for (ItemCategory c : kAllCategories) out[c];
  for (const auto& item : items) {
    if (seen_after.contains(item.item_id) &&
        !seen_before.contains(item.item_id)) {
      out[item.category].insert(item.item_id);
    }
  }
  return out;
}

}  // namespace twintower::eval
