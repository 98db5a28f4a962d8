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
#include <cmath>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "gradcheck.h"
#include "testing.h"
#include "twintower/error.h"
#include "twintower/training/corpus.h"
#include "twintower/training/trainer.h"

namespace twintower::training {
namespace {

namespace nx = numerics;

PreparedCorpus TinyCorpus(std::uint64_t seed = 1, std::size_t users = 5,
                          std::size_t items = 8) {
  return PreparedCorpus::Build(testing::TinyDataset(seed, users, items),
                               testing::TinySplit(), testing::TinySchema());
}

TEST(PredictTest, SigmoidOfDot) {
  double u[] = {1, 2, 3};
  double i[] = {4, 5, 6};
  EXPECT_DOUBLE_EQ(Predict(u, i), 1.0 / (1.0 + std::exp(-32.0)));
  double short_i[] = {1, 2};
  EXPECT_THROW(Predict(u, short_i), ShapeError);
}

TEST(LossTest, CrossEntropyValues) {
  EXPECT_NEAR(Loss(0.7310585786300049, 1.0), 0.3132616875182228, 1e-12);
  EXPECT_NEAR(Loss(0.25, 0.0), -std::log(0.75), 1e-15);
  EXPECT_TRUE(std::isfinite(Loss(0.0, 1.0)));
}

TEST(SampleNegativesTest, WithoutReplacementFromUnwatched) {
  std::vector<std::size_t> catalog(30);
  for (std::size_t i = 0; i < catalog.size(); ++i) catalog[i] = i;
  std::vector<std::size_t> watched{2, 3, 5, 7, 11, 13};
  std::mt19937_64 rng(4);
  auto neg = SampleNegatives(catalog, watched, 3, 10, rng);
  ASSERT_EQ(neg.size(), 30u);
  for (std::size_t p = 0; p < 3; ++p) {
    std::set<std::size_t> draw(neg.begin() + static_cast<std::ptrdiff_t>(p * 10),
                               neg.begin() + static_cast<std::ptrdiff_t>(p * 10 + 10));
    EXPECT_EQ(draw.size(), 10u) << "duplicate within one positive's draw";
    for (std::size_t item : draw) {
      EXPECT_FALSE(std::binary_search(watched.begin(), watched.end(), item));
    }
  }
}

TEST(SampleNegativesTest, SmallPoolFallsBackToReplacement) {
  std::vector<std::size_t> catalog{0, 1, 2, 3};
  std::vector<std::size_t> watched{0, 1};
  std::mt19937_64 rng(4);
  auto neg = SampleNegatives(catalog, watched, 2, 5, rng);
  ASSERT_EQ(neg.size(), 10u);
  for (std::size_t item : neg) EXPECT_TRUE(item == 2 || item == 3);
  std::vector<std::size_t> all{0, 1, 2, 3};
  EXPECT_TRUE(SampleNegatives(catalog, all, 2, 5, rng).empty());
}

TEST(SampleNegativesTest, RoughlyUniform) {
  std::vector<std::size_t> catalog{0, 1, 2, 3, 4};
  std::vector<std::size_t> watched{};
  std::mt19937_64 rng(7);
  std::map<std::size_t, int> counts;
  for (std::size_t item : SampleNegatives(catalog, watched, 20000, 1, rng)) {
    ++counts[item];
  }
  for (const auto& [item, n] : counts) EXPECT_NEAR(n, 4000, 250) << item;
}

TEST(AdamTest, FirstStepsMatchHandComputation) {
  model::ParameterSet params;
  nx::Tensor w = params.Add("w", {2});
  w.mutable_values()[0] = 1.0;
  w.mutable_values()[1] = -2.0;
  AdamState state = AdamState::For(params);
  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  std::vector<double> m(2, 0.0), v(2, 0.0), theta{1.0, -2.0};
  for (int step = 1; step <= 3; ++step) {
    // loss = mean(w * w) so grad = w.
    {
      nx::Tape tape;
      nx::TapeScope scope(tape);
      tape.Backward(nx::Mean(nx::Mul(w, w)));
    }
    AdamStep(params, state, cfg);
    for (std::size_t i = 0; i < 2; ++i) {
      double g = theta[i];
      m[i] = 0.9 * m[i] + 0.1 * g;
      v[i] = 0.999 * v[i] + 0.001 * g * g;
      double mh = m[i] / (1.0 - std::pow(0.9, step));
      double vh = v[i] / (1.0 - std::pow(0.999, step));
      theta[i] -= 0.1 * mh / (std::sqrt(vh) + 1e-8);
      EXPECT_NEAR(w[i], theta[i], 1e-15) << "step " << step;
    }
  }
  EXPECT_EQ(state.step, 3u);
}

TEST(AdamTest, UnreachedTensorDoesNotMove) {
  model::ParameterSet params;
  nx::Tensor w = params.Add("w", {1});
  nx::Tensor idle = params.Add("idle", {1});
  idle.mutable_values()[0] = 0.5;
  AdamState state = AdamState::For(params);
  {
    nx::Tape tape;
    nx::TapeScope scope(tape);
    tape.Backward(nx::Mean(nx::Scale(w, 2.0)));
  }
  AdamStep(params, state, TrainConfig{});
  EXPECT_EQ(idle[0], 0.5);
  EXPECT_NE(w[0], 0.0);
}

TEST(TrainConfigTest, Validation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.negative_rate = 0;
  EXPECT_THROW(c.Validate(), InputError);
  c = TrainConfig{};
  c.beta1 = 1.0;
  EXPECT_THROW(c.Validate(), InputError);
  c = TrainConfig{};
  c.learning_rate = -1;
  EXPECT_THROW(c.Validate(), InputError);
  c = TrainConfig{};
  c.batch_size = 7;
  c.epochs = 3;
  TrainConfig back = nlohmann::json(c).get<TrainConfig>();
  EXPECT_EQ(back.batch_size, 7u);
  EXPECT_EQ(back.epochs, 3u);
}

TEST(EpochExamplesTest, PositivesAndNegativesPerUser) {
  PreparedCorpus corpus = TinyCorpus(2, 6, 12);
  TrainConfig cfg;
  cfg.negative_rate = 2;
  std::mt19937_64 rng(3);
  auto ex = BuildEpochExamples(corpus, cfg, rng);
  std::size_t expected = 0;
  for (const auto& u : corpus.users()) expected += u.positives.size() * 3;
  ASSERT_EQ(ex.size(), expected);
  // Each user's examples form one contiguous run.
  std::set<std::size_t> finished;
  for (std::size_t k = 0; k < ex.size(); ++k) {
    if (k > 0 && ex[k].user != ex[k - 1].user) {
      EXPECT_TRUE(finished.insert(ex[k - 1].user).second);
    }
    EXPECT_FALSE(finished.contains(ex[k].user));
    const auto& user = corpus.users()[ex[k].user];
    bool is_positive = std::find(user.positives.begin(), user.positives.end(),
                                 ex[k].item) != user.positives.end();
    if (ex[k].label == 1.0) {
      EXPECT_TRUE(is_positive);
    } else {
      EXPECT_FALSE(std::binary_search(user.watched.begin(), user.watched.end(),
                                      ex[k].item));
    }
  }
}

TEST(BatchLossTest, EqualsMeanOfPerExampleLosses) {
  PreparedCorpus corpus = TinyCorpus();
  model::TwoTowerModel model(testing::TinyModelConfig(), corpus.dims(), 5);
  TrainConfig cfg;
  cfg.negative_rate = 2;
  std::mt19937_64 rng(1);
  auto ex = BuildEpochExamples(corpus, cfg, rng);
  ASSERT_FALSE(ex.empty());
  double total = 0.0;
  for (const auto& e : ex) {
    nx::Tensor u = model.EmbedUser(TrainingInput(corpus.users()[e.user], model.config()));
    const features::EncodedItemFeatures* f = &corpus.encoded()[e.item];
    nx::Tensor i = model.EmbedItems({&f, 1}).embedding;
    total += Loss(Predict(u.values(), i.values()), e.label);
  }
  EXPECT_NEAR(BatchLoss(model, corpus, ex).item(),
              total / static_cast<double>(ex.size()), 1e-12);
}

TEST(BatchLossTest, GradientMatchesFiniteDifferences) {
  for (auto kind : {model::FusionKind::kAttention, model::FusionKind::kConcatenation}) {
    auto r = testing::CheckTwoTowerLoss(17, kind, 1e-6, 1e-6);
    EXPECT_LT(r.max_error, 1e-3) << r.worst;
    EXPECT_GT(r.checked, 100u);
  }
}

TEST(FitTest, DeterministicForASeed) {
  PreparedCorpus corpus = TinyCorpus(3, 8, 12);
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 16;
  cfg.negative_rate = 3;
  auto a = Train(corpus, testing::TinyModelConfig(), cfg);
  auto b = Train(corpus, testing::TinyModelConfig(), cfg);
  EXPECT_EQ(a.trace.epoch_loss, b.trace.epoch_loss);
  for (std::size_t k = 0; k < a.model.parameters().entries().size(); ++k) {
    EXPECT_TRUE(nx::BitwiseEqual(a.model.parameters().entries()[k].tensor,
                                 b.model.parameters().entries()[k].tensor));
  }
  EXPECT_EQ(a.adam.step, b.adam.step);
  cfg.seed = 2;
  auto c = Train(corpus, testing::TinyModelConfig(), cfg);
  EXPECT_NE(a.trace.epoch_loss, c.trace.epoch_loss);
}

TEST(FitTest, NonFiniteLossNamesEpochAndBatch) {
  PreparedCorpus corpus = TinyCorpus();
  model::TwoTowerModel model(testing::TinyModelConfig(), corpus.dims(), 1);
  AdamState adam = AdamState::For(model.parameters());
  nx::Tensor out_b = model.parameters().Get("item/output_b");
  out_b.mutable_values()[0] = std::nan("");
  TrainConfig cfg;
  cfg.epochs = 1;
  try {
    Fit(model, adam, corpus, cfg);
    FAIL() << "expected TrainingError";
  } catch (const TrainingError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("epoch 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("batch 1"), std::string::npos) << msg;
  }
}

TEST(FitTest, RejectsMismatchedModel) {
  PreparedCorpus corpus = TinyCorpus();
  model::ModelDims dims = corpus.dims();
  dims.synopsis += 1;
  model::TwoTowerModel model(testing::TinyModelConfig(), dims, 1);
  AdamState adam = AdamState::For(model.parameters());
  EXPECT_THROW(Fit(model, adam, corpus, TrainConfig{}), InputError);
}

}  // namespace
}  // namespace twintower::training
