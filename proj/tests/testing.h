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

// Small hand-sized corpora shared by the tests.

#ifndef TWINTOWER_TESTS_TESTING_H_
#define TWINTOWER_TESTS_TESTING_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "twintower/data/dataset.h"
#include "twintower/eval/split.h"
#include "twintower/features/categorical.h"
#include "twintower/model/two_tower.h"

namespace twintower::testing {

// X = days [0, 30), Y = [30, 37), X' = [7, 37), Y' = [37, 44).
eval::SplitConfig TinySplit();

// `users` users and `items` items with 4-wide word and cover-art vectors.
// Every user watches a few items in X or Y and a few in Y'. The last
// `cold` items are only ever watched in Y'.
data::Dataset TinyDataset(std::uint64_t seed, std::size_t users,
                          std::size_t items, std::size_t cold = 2);

// Vocabulary capacities small enough for exhaustive finite differences.
features::SchemaConfig TinySchema();

// d = 6, w = 4, one residual block, history of 5.
model::ModelConfig TinyModelConfig();

std::vector<double> RandomVector(std::size_t n, double scale,
                                 std::mt19937_64& rng);

// A fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace twintower::testing

#endif  // TWINTOWER_TESTS_TESTING_H_
