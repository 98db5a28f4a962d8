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

#include "twintower/training/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "twintower/error.h"
#include "twintower/numerics/ops.h"

namespace twintower::training {
namespace {

namespace nx = twintower::numerics;

// Keeps the sampling stream apart from parameter initialisation.
constexpr std::uint64_t kSamplingSalt = 0x5851f42d4c957f2dULL;

}  // namespace

void TrainConfig::Validate() const {
  if (negative_rate < 1) throw InputError("negative_rate must be at least 1");
  if (batch_size < 1) throw InputError("batch_size must be at least 1");
  if (epochs < 1) throw InputError("epochs must be at least 1");
  if (!(learning_rate >= 0.0)) throw InputError("learning_rate must be >= 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw InputError("Adam betas must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw InputError("Adam epsilon must be positive");
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"negative_rate", c.negative_rate},
                     {"learning_rate", c.learning_rate},
                     {"beta1", c.beta1},
                     {"beta2", c.beta2},
                     {"epsilon", c.epsilon},
                     {"batch_size", c.batch_size},
                     {"epochs", c.epochs},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  TrainConfig d;
  c.negative_rate = j.value("negative_rate", d.negative_rate);
  c.learning_rate = j.value("learning_rate", d.learning_rate);
  c.beta1 = j.value("beta1", d.beta1);
  c.beta2 = j.value("beta2", d.beta2);
  c.epsilon = j.value("epsilon", d.epsilon);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.epochs = j.value("epochs", d.epochs);
  c.seed = j.value("seed", d.seed);
}

double Predict(std::span<const double> u, std::span<const double> i) {
  if (u.size() != i.size()) {
    throw ShapeError("predict: user and item dimensions differ (" +
                     std::to_string(u.size()) + " vs " +
                     std::to_string(i.size()) + ")");
  }
  double dot = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) dot += u[k] * i[k];
  if (dot >= 0.0) return 1.0 / (1.0 + std::exp(-dot));
  double e = std::exp(dot);
  return e / (1.0 + e);
}

double Loss(double p, double y) {
  p = std::clamp(p, nx::kProbabilityClamp, 1.0 - nx::kProbabilityClamp);
  return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
}

std::vector<std::size_t> SampleNegatives(std::span<const std::size_t> catalog,
                                         std::span<const std::size_t> watched,
                                         std::size_t positives,
                                         std::size_t rate,
                                         std::mt19937_64& rng) {
  std::vector<std::size_t> pool;
  pool.reserve(catalog.size());
  for (std::size_t item : catalog) {
    if (!std::binary_search(watched.begin(), watched.end(), item)) {
      pool.push_back(item);
    }
  }
  std::vector<std::size_t> out;
  if (pool.empty() || positives == 0) {
    if (positives > 0) spdlog::warn("no unwatched item left to sample");
    return out;
  }
  out.reserve(positives * rate);
  if (pool.size() < rate) {
    spdlog::warn("only {} unwatched items for negative rate {}; sampling with "
                 "replacement",
                 pool.size(), rate);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (std::size_t n = 0; n < positives * rate; ++n) {
      out.push_back(pool[pick(rng)]);
    }
    return out;
  }
  for (std::size_t p = 0; p < positives; ++p) {
    // Partial Fisher-Yates: the first `rate` slots become the draw.
    for (std::size_t k = 0; k < rate; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
      std::swap(pool[k], pool[pick(rng)]);
      out.push_back(pool[k]);
    }
  }
  return out;
}

AdamState AdamState::For(const model::ParameterSet& params) {
  AdamState s;
  for (const auto& e : params.entries()) {
    s.m.emplace_back(e.tensor.size(), 0.0);
    s.v.emplace_back(e.tensor.size(), 0.0);
  }
  return s;
}

void AdamStep(model::ParameterSet& params, AdamState& state,
              const TrainConfig& config) {
  const auto& entries = params.entries();
  if (state.m.size() != entries.size() || state.v.size() != entries.size()) {
    throw Error("optimizer state does not match the parameter set");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correct1 = 1.0 - std::pow(config.beta1, t);
  const double correct2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    nx::Tensor tensor = entries[k].tensor;
    // A tensor the loss never reached has zero gradient; the moments still
    // decay and the step still moves it.
    std::vector<double>& g = tensor.storage()->grad;
    if (g.empty()) g.assign(tensor.size(), 0.0);
    std::span<double> theta = tensor.mutable_values();
    std::vector<double>& m = state.m[k];
    std::vector<double>& v = state.v[k];
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
      double m_hat = m[i] / correct1;
      double v_hat = v[i] / correct2;
      theta[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
  }
}

std::vector<Example> BuildEpochExamples(const PreparedCorpus& corpus,
                                        const TrainConfig& config,
                                        std::mt19937_64& rng) {
  // Users are visited in shuffled order and each user's positives and
  // negatives stay contiguous (shuffled among themselves), so a batch holds
  // few distinct users and the user tower runs once per user.
  const auto& users = corpus.users();
  std::vector<std::size_t> order(users.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Example> out;
  for (std::size_t u : order) {
    const UserRecord& user = users[u];
    if (user.positives.empty()) continue;
    std::size_t first = out.size();
    for (std::size_t item : user.positives) out.push_back({u, item, 1.0});
    for (std::size_t item :
         SampleNegatives(corpus.warm_items(), user.watched,
                         user.positives.size(), config.negative_rate, rng)) {
      out.push_back({u, item, 0.0});
    }
    std::shuffle(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(),
                 rng);
  }
  return out;
}

model::UserInput TrainingInput(const UserRecord& user,
                               const model::ModelConfig& config) {
  return {model::TruncateHistory(user.train_history, config.history_length),
          user.features};
}

model::UserInput ScoringInput(const UserRecord& user,
                              const model::ModelConfig& config) {
  return {model::TruncateHistory(user.score_history, config.history_length),
          user.features};
}

nx::Tensor BatchLoss(const model::TwoTowerModel& model,
                     const PreparedCorpus& corpus,
                     std::span<const Example> batch) {
  if (batch.empty()) throw Error("empty training batch");
  // Each distinct item is embedded once per batch.
  std::unordered_map<std::size_t, std::size_t> item_row;
  std::vector<const features::EncodedItemFeatures*> items;
  for (const Example& ex : batch) {
    if (item_row.emplace(ex.item, items.size()).second) {
      items.push_back(&corpus.encoded()[ex.item]);
    }
  }
  nx::Tensor item_emb = model.EmbedItems(items).embedding;

  // Examples grouped by user in order of first appearance.
  std::vector<std::size_t> user_order;
  std::unordered_map<std::size_t, std::vector<std::size_t>> by_user;
  for (std::size_t k = 0; k < batch.size(); ++k) {
    auto [it, fresh] = by_user.try_emplace(batch[k].user);
    if (fresh) user_order.push_back(batch[k].user);
    it->second.push_back(k);
  }
  std::vector<nx::Tensor> logits;
  std::vector<double> labels;
  labels.reserve(batch.size());
  for (std::size_t u : user_order) {
    const auto& members = by_user.at(u);
    std::vector<std::size_t> rows;
    rows.reserve(members.size());
    for (std::size_t k : members) {
      rows.push_back(item_row.at(batch[k].item));
      labels.push_back(batch[k].label);
    }
    nx::Tensor user_emb = model.EmbedUser(
        TrainingInput(corpus.users()[u], model.config()));
    logits.push_back(
        nx::MatMul(user_emb, nx::EmbeddingLookup(item_emb, rows), true));
  }
  nx::Tensor p = nx::Sigmoid(nx::Concat(logits));
  return nx::BinaryCrossEntropy(p, labels);
}

TrainResult Fit(model::TwoTowerModel& model, AdamState& adam,
                const PreparedCorpus& corpus, const TrainConfig& config) {
  config.Validate();
  if (model.dims() != corpus.dims()) {
    throw InputError("model dimensions do not match the corpus");
  }
  std::mt19937_64 rng(config.seed ^ kSamplingSalt);
  TrainResult result;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<Example> examples = BuildEpochExamples(corpus, config, rng);
    if (examples.empty()) {
      throw InputError("no training positives in the training label window");
    }
    result.examples_per_epoch = examples.size();
    double total = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < examples.size();
         start += config.batch_size, ++batch_index) {
      std::size_t n = std::min(config.batch_size, examples.size() - start);
      std::span<const Example> batch(examples.data() + start, n);
      model.parameters().ZeroGrad();
      nx::Tape tape;
      nx::Tensor loss;
      {
        nx::TapeScope scope(tape);
        loss = BatchLoss(model, corpus, batch);
      }
      double value = loss.item();
      if (!std::isfinite(value)) {
        throw TrainingError("non-finite loss " + std::to_string(value) +
                            " at epoch " + std::to_string(epoch + 1) +
                            ", batch " + std::to_string(batch_index + 1) +
                            " (examples " + std::to_string(start) + ".." +
                            std::to_string(start + n - 1) + ")");
      }
      tape.Backward(loss);
      AdamStep(model.parameters(), adam, config);
      total += value * static_cast<double>(n);
    }
    result.epoch_loss.push_back(total / static_cast<double>(examples.size()));
    spdlog::debug("epoch {} mean loss {:.6f}", epoch + 1,
                  result.epoch_loss.back());
  }
  return result;
}

TrainedModel Train(const PreparedCorpus& corpus,
                   const model::ModelConfig& model_config,
                   const TrainConfig& config) {
  config.Validate();
  model::TwoTowerModel model(model_config, corpus.dims(), config.seed);
  AdamState adam = AdamState::For(model.parameters());
  TrainResult trace = Fit(model, adam, corpus, config);
  return TrainedModel{std::move(model), std::move(adam), std::move(trace)};
}

}  // namespace twintower::training
