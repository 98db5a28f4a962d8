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

// Top-K ranking and the four offline metrics.

#ifndef TWINTOWER_EVAL_METRICS_H_
#define TWINTOWER_EVAL_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twintower/features/records.h"

namespace twintower::eval {

inline constexpr std::size_t kDefaultTopK = 6;

// Positions of the K highest scores, score-descending, ties by ascending
// id. Returns every candidate when there are at most K.
std::vector<std::size_t> RecommendTopK(std::span<const double> scores,
                                       std::span<const std::string> ids,
                                       std::size_t k);

// Per-user recommendation lists and label sets over the same item ids.
struct UserOutcome {
  std::vector<std::string> recommended;  // at most K, no repeats
  std::set<std::string> watched;         // label-window watches
};

struct CategoryMetrics {
  double precision = 0.0;
  double recall = 0.0;
  std::size_t coverage = 0;
  std::size_t converted_coverage = 0;
  std::size_t users_scored = 0;
  std::size_t users_with_labels = 0;  // precision/recall denominator
  std::size_t candidates = 0;
};

// Precision and recall average over users with at least one watch; both
// coverages count recommendations to every user.
CategoryMetrics ComputeMetrics(std::span<const UserOutcome> outcomes,
                               std::size_t k);

struct EvalReport {
  std::size_t k = kDefaultTopK;
  std::string mode;    // "warm" | "cold"
  std::string status;  // "ok" | "empty"
  std::map<ItemCategory, CategoryMetrics> categories;
  double density = 0.0;

  nlohmann::json ToJson() const;
  std::string ToTable() const;
};

inline constexpr const char* kMetricNames[] = {"precision", "recall",
                                               "coverage",
                                               "converted_coverage"};

double MetricValue(const CategoryMetrics& m, std::string_view name);

// 100 * (metric - baseline) / baseline per category and metric; nullopt
// where the baseline is zero.
using LiftTable =
    std::map<ItemCategory, std::map<std::string, std::optional<double>>>;

LiftTable Lift(const EvalReport& report, const EvalReport& baseline);
nlohmann::json LiftToJson(const LiftTable& lift);

// A uniformly random K-subset of `candidates` (positions) for each of
// `users` users, in draw order.
std::vector<std::vector<std::size_t>> RandomBaseline(std::size_t users,
                                                     std::size_t candidates,
                                                     std::size_t k,
                                                     std::mt19937_64& rng);

}  // namespace twintower::eval

#endif  // TWINTOWER_EVAL_METRICS_H_
