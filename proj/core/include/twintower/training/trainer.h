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

// Preference prediction sigma(u . i), binary cross-entropy over positives
// from Y and sampled negatives, and Adam.

#ifndef TWINTOWER_TRAINING_TRAINER_H_
#define TWINTOWER_TRAINING_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "twintower/model/parameters.h"
#include "twintower/model/two_tower.h"
#include "twintower/numerics/tensor.h"
#include "twintower/training/corpus.h"

namespace twintower::training {

struct TrainConfig {
  std::size_t negative_rate = 20;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t batch_size = 256;
  std::size_t epochs = 10;
  std::uint64_t seed = 1;

  // Throws InputError on a zero rate, batch size or epoch count, or on Adam
  // constants outside their ranges.
  void Validate() const;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

// sigma(u . i). Throws ShapeError when the sizes differ.
double Predict(std::span<const double> u, std::span<const double> i);

// Cross-entropy of one prediction, clamped like the batch loss.
double Loss(double p, double y);

// `rate` items per positive drawn uniformly without replacement from
// `catalog` minus `watched` (both item positions; `watched` sorted). When
// fewer than `rate` items remain, draws with replacement and logs a warning;
// returns an empty list when nothing remains.
std::vector<std::size_t> SampleNegatives(std::span<const std::size_t> catalog,
                                         std::span<const std::size_t> watched,
                                         std::size_t positives,
                                         std::size_t rate, std::mt19937_64& rng);

// Per-tensor first and second moments in parameter order.
struct AdamState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  std::uint64_t step = 0;

  static AdamState For(const model::ParameterSet& params);
};

// One bias-corrected Adam update from the current gradients.
void AdamStep(model::ParameterSet& params, AdamState& state,
              const TrainConfig& config);

struct Example {
  std::size_t user = 0;  // index into PreparedCorpus::users()
  std::size_t item = 0;  // item position
  double label = 0.0;
};

// Positives of every user plus freshly sampled negatives. Users come in
// shuffled order with their examples contiguous and shuffled.
std::vector<Example> BuildEpochExamples(const PreparedCorpus& corpus,
                                        const TrainConfig& config,
                                        std::mt19937_64& rng);

// History and features of a user as seen during training (X) or scoring (X').
model::UserInput TrainingInput(const UserRecord& user,
                               const model::ModelConfig& config);
model::UserInput ScoringInput(const UserRecord& user,
                              const model::ModelConfig& config);

// Mean cross-entropy of a batch. With an active tape the graph is recorded
// for Backward().
numerics::Tensor BatchLoss(const model::TwoTowerModel& model,
                           const PreparedCorpus& corpus,
                           std::span<const Example> batch);

struct TrainResult {
  std::vector<double> epoch_loss;  // mean example loss per epoch
  std::size_t examples_per_epoch = 0;
};

// Runs config.epochs epochs of minibatch Adam on an already initialized
// model. Throws TrainingError naming epoch and batch on a non-finite loss.
TrainResult Fit(model::TwoTowerModel& model, AdamState& adam,
                const PreparedCorpus& corpus, const TrainConfig& config);

struct TrainedModel {
  model::TwoTowerModel model;
  AdamState adam;
  TrainResult trace;
};

// Builds a model seeded with config.seed and fits it.
TrainedModel Train(const PreparedCorpus& corpus,
                   const model::ModelConfig& model_config,
                   const TrainConfig& config);

}  // namespace twintower::training

#endif  // TWINTOWER_TRAINING_TRAINER_H_
