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


#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "twintower/util/digest.h"
#include "twintower/util/parallel.h"

namespace twintower::util {
namespace {

class ThreadsEnv {
 public:
  explicit ThreadsEnv(const char* value) {
    if (const char* old = std::getenv(kThreadsEnv)) saved_ = old;
    if (value != nullptr) {
      ::setenv(kThreadsEnv, value, 1);
    } else {
      ::unsetenv(kThreadsEnv);
    }
  }
  ~ThreadsEnv() {
    if (saved_.empty()) {
      ::unsetenv(kThreadsEnv);
    } else {
      ::setenv(kThreadsEnv, saved_.c_str(), 1);
    }
  }

 private:
  std::string saved_;
};

TEST(ScoringThreadsTest, EnvironmentCapsConcurrency) {
  std::size_t uncapped;
  {
    ThreadsEnv env(nullptr);
    uncapped = ScoringThreads();
    EXPECT_GE(uncapped, 1u);
  }
  {
    ThreadsEnv env("1");
    EXPECT_EQ(ScoringThreads(), 1u);
  }
  {
    ThreadsEnv env("100000");
    EXPECT_EQ(ScoringThreads(), uncapped);
  }
  for (const char* junk : {"0", "-3", "abc", "2x", ""}) {
    ThreadsEnv env(junk);
    EXPECT_EQ(ScoringThreads(), uncapped) << junk;
  }
}

TEST(ParallelForTest, VisitsEveryIndexOnce) {
  for (std::size_t threads : {1u, 2u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(101);
    ParallelFor(hits.size(), threads, [&](std::size_t i) { ++hits[i]; });
    for (std::size_t i = 0; i < hits.size(); ++i) {
      EXPECT_EQ(hits[i].load(), 1) << i << " threads " << threads;
    }
  }
  ParallelFor(0, 4, [](std::size_t) { FAIL(); });
}

TEST(ParallelForTest, RethrowsWorkerException) {
  EXPECT_THROW(ParallelFor(50, 4,
                           [](std::size_t i) {
                             if (i == 17) throw std::runtime_error("boom");
                           }),
               std::runtime_error);
}

TEST(DigestTest, KnownVectors) {
  EXPECT_EQ(Sha256Hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

}  // namespace
}  // namespace twintower::util
