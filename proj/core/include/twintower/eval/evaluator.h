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

// Scoring protocol. Users are embedded from their X' history and ranked
// against the candidates of each category separately; labels are their Y'
// watches among those candidates.
//
//   warm  candidates are the items of the category with an ID row, minus
//         what the user already watched in X'
//   cold  candidates are the cold-start items of the category, scored with
//         a zero ID embedding
//
// Only users with a non-empty X' history are scored.

#ifndef TWINTOWER_EVAL_EVALUATOR_H_
#define TWINTOWER_EVAL_EVALUATOR_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "twintower/eval/metrics.h"
#include "twintower/model/two_tower.h"
#include "twintower/training/corpus.h"

namespace twintower::eval {

enum class CandidatePolicy { kWarm, kCold };

std::string_view CandidatePolicyName(CandidatePolicy p);
CandidatePolicy ParseCandidatePolicy(std::string_view name);

struct EvalConfig {
  std::size_t k = kDefaultTopK;
  CandidatePolicy policy = CandidatePolicy::kWarm;
  // Drop items the user watched in X' from warm candidates.
  bool exclude_seen = true;
  // 0 means util::ScoringThreads().
  std::size_t threads = 0;

  void Validate() const;
};

void to_json(nlohmann::json& j, const EvalConfig& c);
void from_json(const nlohmann::json& j, EvalConfig& c);

// Candidate item positions per category, in item_id order.
std::map<ItemCategory, std::vector<std::size_t>> Candidates(
    const training::PreparedCorpus& corpus, CandidatePolicy policy);

// Indices of users that are scored.
std::vector<std::size_t> ScoredUsers(const training::PreparedCorpus& corpus);

// Item embeddings [n, d] for the given positions, no tape. Under the cold
// policy the ID row is replaced by zeros for every item.
numerics::Tensor EmbedCandidates(const model::TwoTowerModel& model,
                                 const training::PreparedCorpus& corpus,
                                 std::span<const std::size_t> items,
                                 bool zero_id);

EvalReport Evaluate(const model::TwoTowerModel& model,
                    const training::PreparedCorpus& corpus,
                    const EvalConfig& config);

// Same users, candidates and labels as Evaluate, with a uniform random
// K-subset of each user's candidates as the recommendation.
EvalReport EvaluateRandom(const training::PreparedCorpus& corpus,
                          const EvalConfig& config, std::uint64_t seed);

inline constexpr std::size_t kAttentionBins = 20;

// Per category and channel: a 20-bin histogram of alpha on [0, 1] over all
// items of the category, with mean and median. Throws InputError for
// models without learned attention.
nlohmann::json AttentionDistribution(const model::TwoTowerModel& model,
                                     const training::PreparedCorpus& corpus);

}  // namespace twintower::eval

#endif  // TWINTOWER_EVAL_EVALUATOR_H_
