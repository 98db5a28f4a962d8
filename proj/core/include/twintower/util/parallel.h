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

#ifndef TWINTOWER_UTIL_PARALLEL_H_
#define TWINTOWER_UTIL_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace twintower::util {

inline constexpr const char* kThreadsEnv = "TWINTOWER_THREADS";

// Hardware concurrency, capped by TWINTOWER_THREADS when it holds a
// positive integer. Never less than 1.
std::size_t ScoringThreads();

// Runs fn(i) for i in [0, n) on up to `threads` workers with static
// striding. The first exception thrown by any worker is rethrown.
void ParallelFor(std::size_t n, std::size_t threads,
                 const std::function<void(std::size_t)>& fn);

}  // namespace twintower::util

#endif  // TWINTOWER_UTIL_PARALLEL_H_
