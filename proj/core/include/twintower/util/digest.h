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

#ifndef TWINTOWER_UTIL_DIGEST_H_
#define TWINTOWER_UTIL_DIGEST_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace twintower::util {

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view bytes);
std::string FileSha256Hex(const std::filesystem::path& path);

// 64-bit FNV-1a. Stable across platforms; used to derive per-name seeds.
std::uint64_t Fnv1a64(std::string_view bytes);

}  // namespace twintower::util

#endif  // TWINTOWER_UTIL_DIGEST_H_
