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


#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "oracles.h"
#include "testing.h"
#include "twintower/error.h"
#include "twintower/eval/evaluator.h"
#include "twintower/training/corpus.h"
#include "twintower/training/trainer.h"

namespace twintower::eval {
namespace {

namespace nx = numerics;
using training::PreparedCorpus;

PreparedCorpus Corpus(std::size_t cold = 4) {
  return PreparedCorpus::Build(testing::TinyDataset(7, 20, 24, cold),
                               testing::TinySplit(), testing::TinySchema());
}

TEST(CorpusTest, IdRowsFollowItemIdOrderAndSkipColdItems) {
  PreparedCorpus c = Corpus();
  auto ids = c.id_item_ids();
  EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
  EXPECT_EQ(ids.size(), c.warm_items().size());
  std::size_t cold = 0;
  for (const auto& [category, items] : c.cold_items()) {
    for (std::size_t pos : items) {
      ++cold;
      EXPECT_EQ(c.items()[pos].category, category);
      EXPECT_FALSE(c.encoded()[pos].id_index.has_value());
    }
  }
  EXPECT_EQ(cold, 4u);
  for (std::size_t row = 0; row < c.warm_items().size(); ++row) {
    EXPECT_EQ(c.encoded()[c.warm_items()[row]].id_index, row);
  }
}

TEST(CorpusTest, UserRecordsRespectWindows) {
  data::Dataset ds = testing::TinyDataset(9, 15, 20);
  PreparedCorpus c = PreparedCorpus::Build(ds, testing::TinySplit(), testing::TinySchema());
  SplitConfig s = testing::TinySplit();
  auto watched_in = [&](const std::string& user, const std::string& item,
                        const Window& w) {
    return std::any_of(ds.interactions.begin(), ds.interactions.end(),
                       [&](const data::Interaction& r) {
                         return r.user_id == user && r.item_id == item &&
                                w.Contains(r.ts);
                       });
  };
  for (const auto& u : c.users()) {
    for (std::size_t pos : u.positives) {
      EXPECT_TRUE(watched_in(u.user_id, c.items()[pos].item_id, s.train_label));
    }
    for (std::size_t row : u.train_history) {
      EXPECT_TRUE(watched_in(u.user_id, c.items()[c.warm_items()[row]].item_id,
                             s.train_input));
    }
    for (std::size_t row : u.score_history) {
      EXPECT_TRUE(watched_in(u.user_id, c.items()[c.warm_items()[row]].item_id,
                             s.score_input));
    }
    for (std::size_t pos : u.labels) {
      EXPECT_TRUE(watched_in(u.user_id, c.items()[pos].item_id, s.score_label));
    }
  }
}

TEST(CorpusTest, SchemaHashTracksIdRows) {
  data::Dataset ds = testing::TinyDataset(9, 15, 20);
  PreparedCorpus a = PreparedCorpus::Build(ds, testing::TinySplit(), testing::TinySchema());
  PreparedCorpus b = PreparedCorpus::Build(ds, testing::TinySplit(), testing::TinySchema());
  EXPECT_EQ(a.SchemaHash(), b.SchemaHash());
  ds.interactions.pop_back();
  ds.interactions.erase(ds.interactions.begin());
  PreparedCorpus c = PreparedCorpus::Build(ds, testing::TinySplit(), testing::TinySchema());
  if (c.id_item_ids() != a.id_item_ids()) {
    EXPECT_NE(c.SchemaHash(), a.SchemaHash());
  }
  PreparedCorpus d = PreparedCorpus::Build(ds, testing::TinySplit(), features::SchemaConfig{});
  EXPECT_NE(d.SchemaHash(), c.SchemaHash());
}

TEST(EvalConfigTest, ParseAndValidate) {
  EXPECT_EQ(ParseCandidatePolicy("cold"), CandidatePolicy::kCold);
  EXPECT_THROW(ParseCandidatePolicy("hot"), InputError);
  EvalConfig c;
  c.k = 0;
  EXPECT_THROW(c.Validate(), InputError);
  c.k = 4;
  c.policy = CandidatePolicy::kCold;
  EvalConfig back = nlohmann::json(c).get<EvalConfig>();
  EXPECT_EQ(back.k, 4u);
  EXPECT_EQ(back.policy, CandidatePolicy::kCold);
}

TEST(CandidatesTest, WarmAndColdSets) {
  PreparedCorpus c = Corpus();
  auto warm = Candidates(c, CandidatePolicy::kWarm);
  auto cold = Candidates(c, CandidatePolicy::kCold);
  std::size_t n_warm = 0;
  for (const auto& [category, items] : warm) {
    n_warm += items.size();
    for (std::size_t pos : items) {
      EXPECT_TRUE(c.encoded()[pos].id_index.has_value());
      EXPECT_EQ(c.items()[pos].category, category);
    }
  }
  EXPECT_EQ(n_warm, c.warm_items().size());
  EXPECT_EQ(cold, c.cold_items());
}

// Scores by hand, then ranks and counts with the brute-force oracle.
CategoryMetrics ManualWarmMetrics(const model::TwoTowerModel& m,
                                  const PreparedCorpus& c, ItemCategory category,
                                  std::size_t k) {
  std::vector<std::size_t> items = Candidates(c, CandidatePolicy::kWarm).at(category);
  testing::MetricInstance inst;
  std::vector<std::vector<double>> emb;
  for (std::size_t pos : items) {
    const features::EncodedItemFeatures* f = &c.encoded()[pos];
    auto e = m.EmbedItems({&f, 1}).embedding;
    emb.emplace_back(e.values().begin(), e.values().end());
  }
  eval::CategoryMetrics out;
  std::vector<testing::MetricInstance> per_user;
  for (const auto& user : c.users()) {
    if (user.score_history.empty()) continue;
    auto u = m.EmbedUser(training::ScoringInput(user, m.config()));
    testing::MetricInstance one;
    one.scores.emplace_back();
    std::set<std::string> labels;
    for (std::size_t s = 0; s < items.size(); ++s) {
      const std::string& id = c.items()[items[s]].item_id;
      if (std::binary_search(user.labels.begin(), user.labels.end(), items[s])) {
        labels.insert(id);
      }
      if (std::binary_search(user.score_seen.begin(), user.score_seen.end(),
                             items[s])) {
        continue;
      }
      double dot = 0.0;
      for (std::size_t j = 0; j < emb[s].size(); ++j) dot += u[j] * emb[s][j];
      one.candidates.push_back(id);
      one.scores[0].push_back(dot);
    }
    one.labels.push_back(labels);
    per_user.push_back(std::move(one));
  }
  // Per-user candidate lists differ, so merge per-user oracle results.
  std::set<std::string> rec_all, conv_all;
  double p = 0.0, r = 0.0;
  for (const auto& one : per_user) {
    auto top = testing::OracleTopK(one.scores[0], one.candidates, k);
    ++out.users_scored;
    std::size_t hits = 0;
    for (const auto& id : top) {
      rec_all.insert(id);
      if (one.labels[0].contains(id)) {
        ++hits;
        conv_all.insert(id);
      }
    }
    if (one.labels[0].empty()) continue;
    ++out.users_with_labels;
    p += static_cast<double>(hits) / static_cast<double>(k);
    r += static_cast<double>(hits) / static_cast<double>(one.labels[0].size());
  }
  if (out.users_with_labels > 0) {
    out.precision = p / static_cast<double>(out.users_with_labels);
    out.recall = r / static_cast<double>(out.users_with_labels);
  }
  out.coverage = rec_all.size();
  out.converted_coverage = conv_all.size();
  return out;
}

TEST(EvaluateTest, WarmMatchesManualPipeline) {
  PreparedCorpus c = Corpus();
  model::TwoTowerModel m(testing::TinyModelConfig(), c.dims(), 3);
  EvalConfig cfg;
  cfg.k = 3;
  EvalReport r = Evaluate(m, c, cfg);
  EXPECT_EQ(r.status, "ok");
  EXPECT_EQ(r.mode, "warm");
  for (ItemCategory cat : kAllCategories) {
    auto manual = ManualWarmMetrics(m, c, cat, 3);
    const auto& got = r.categories.at(cat);
    EXPECT_TRUE(testing::SameMetrics(got, manual)) << CategoryName(cat);
    EXPECT_EQ(got.users_scored, ScoredUsers(c).size());
  }
}

TEST(EvaluateTest, ThreadCountDoesNotChangeResults) {
  PreparedCorpus c = Corpus();
  model::TwoTowerModel m(testing::TinyModelConfig(), c.dims(), 3);
  EvalConfig one, many;
  one.threads = 1;
  many.threads = 4;
  EXPECT_EQ(Evaluate(m, c, one).ToJson(), Evaluate(m, c, many).ToJson());
}

TEST(EvaluateTest, ColdScoringZeroesTheIdChannel) {
  PreparedCorpus c = Corpus();
  model::TwoTowerModel m(testing::TinyModelConfig(), c.dims(), 3);
  std::vector<std::size_t> warm(c.warm_items().begin(), c.warm_items().begin() + 5);
  nx::Tensor zeroed = EmbedCandidates(m, c, warm, true);
  std::vector<features::EncodedItemFeatures> copies;
  for (std::size_t pos : warm) {
    copies.push_back(c.encoded()[pos]);
    copies.back().id_index.reset();
  }
  std::vector<const features::EncodedItemFeatures*> ptrs;
  for (const auto& f : copies) ptrs.push_back(&f);
  EXPECT_TRUE(nx::BitwiseEqual(zeroed, m.EmbedItems(ptrs).embedding));
  EXPECT_FALSE(nx::BitwiseEqual(zeroed, EmbedCandidates(m, c, warm, false)));
}

TEST(EvaluateTest, ColdModeWithoutColdItemsIsEmpty) {
  data::Dataset ds = testing::TinyDataset(7, 20, 24, 0);
  SplitConfig split = testing::TinySplit();
  auto cold = ColdStartItems(ds.interactions, split, ds.items);
  std::erase_if(ds.interactions, [&](const data::Interaction& r) {
    return std::ranges::any_of(cold, [&](const auto& kv) {
      return kv.second.contains(r.item_id);
    });
  });
  PreparedCorpus c = PreparedCorpus::Build(ds, split, testing::TinySchema());
  model::TwoTowerModel m(testing::TinyModelConfig(), c.dims(), 3);
  EvalConfig cfg;
  cfg.policy = CandidatePolicy::kCold;
  EvalReport r = Evaluate(m, c, cfg);
  EXPECT_EQ(r.status, "empty");
  EXPECT_EQ(EvaluateRandom(c, cfg, 1).status, "empty");
}

TEST(EvaluateTest, RejectsForeignModel) {
  PreparedCorpus c = Corpus();
  model::ModelDims dims = c.dims();
  dims.id_rows += 1;
  model::TwoTowerModel m(testing::TinyModelConfig(), dims, 3);
  EXPECT_THROW(Evaluate(m, c, EvalConfig{}), InputError);
}

TEST(EvaluateRandomTest, SameUsersAndCandidates) {
  PreparedCorpus c = Corpus();
  model::TwoTowerModel m(testing::TinyModelConfig(), c.dims(), 3);
  for (auto policy : {CandidatePolicy::kWarm, CandidatePolicy::kCold}) {
    EvalConfig cfg;
    cfg.policy = policy;
    EvalReport a = Evaluate(m, c, cfg);
    EvalReport b = EvaluateRandom(c, cfg, 9);
    for (ItemCategory cat : kAllCategories) {
      EXPECT_EQ(a.categories.at(cat).users_scored, b.categories.at(cat).users_scored);
      EXPECT_EQ(a.categories.at(cat).users_with_labels,
                b.categories.at(cat).users_with_labels);
      EXPECT_EQ(a.categories.at(cat).candidates, b.categories.at(cat).candidates);
    }
    EXPECT_EQ(EvaluateRandom(c, cfg, 9).ToJson(), b.ToJson());
  }
}

TEST(AttentionDistributionTest, HistogramsCoverEveryItem) {
  PreparedCorpus c = Corpus();
  model::TwoTowerModel m(testing::TinyModelConfig(), c.dims(), 3);
  auto j = AttentionDistribution(m, c);
  EXPECT_EQ(j["bins"], kAttentionBins);
  for (ItemCategory cat : kAllCategories) {
    const auto& entry = j["categories"][std::string(CategoryName(cat))];
    std::size_t n = entry["items"].get<std::size_t>();
    double mean_sum = 0.0;
    for (const auto& [name, ch] : entry["channels"].items()) {
      auto counts = ch["counts"].get<std::vector<std::size_t>>();
      ASSERT_EQ(counts.size(), kAttentionBins);
      std::size_t total = 0;
      for (auto x : counts) total += x;
      EXPECT_EQ(total, n) << name;
      double mean = ch["mean"].get<double>();
      double median = ch["median"].get<double>();
      EXPECT_GT(mean, 0.0);
      EXPECT_LT(median, 1.0);
      mean_sum += mean;
    }
    EXPECT_NEAR(mean_sum, 1.0, 1e-9);
  }
}

TEST(AttentionDistributionTest, RejectsModelsWithoutLearnedWeights) {
  PreparedCorpus c = Corpus();
  model::ModelConfig con = testing::TinyModelConfig();
  con.fusion.kind = model::FusionKind::kConcatenation;
  EXPECT_THROW(AttentionDistribution(model::TwoTowerModel(con, c.dims(), 1), c),
               InputError);
  model::ModelConfig unit = testing::TinyModelConfig();
  unit.unit_attention = true;
  EXPECT_THROW(AttentionDistribution(model::TwoTowerModel(unit, c.dims(), 1), c),
               InputError);
}

}  // namespace
}  // namespace twintower::eval
