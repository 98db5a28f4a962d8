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

#include "twintower/features/records.h"

#include <charconv>
#include <cstdio>

#include "twintower/error.h"

namespace twintower {

std::string_view CategoryName(ItemCategory category) {
  return category == ItemCategory::kMovie ? "movie" : "series";
}

ItemCategory ParseCategory(std::string_view name) {
  if (name == "movie") return ItemCategory::kMovie;
  if (name == "series") return ItemCategory::kSeries;
  throw InputError("unknown item category '" + std::string(name) + "'");
}

std::string YearMonth::ToString() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
  return buf;
}

YearMonth YearMonth::Parse(std::string_view text) {
  YearMonth ym;
  auto dash = text.find('-');
  if (dash == std::string_view::npos) {
    throw InputError("malformed year-month '" + std::string(text) + "'");
  }
  auto parse_int = [&](std::string_view part, int& out) {
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    if (ec != std::errc() || ptr != part.data() + part.size()) {
      throw InputError("malformed year-month '" + std::string(text) + "'");
    }
  };
  parse_int(text.substr(0, dash), ym.year);
  parse_int(text.substr(dash + 1), ym.month);
  if (ym.month < 1 || ym.month > 12) {
    throw InputError("month out of range in '" + std::string(text) + "'");
  }
  return ym;
}

YearMonth YearMonth::FromIndex(int index) {
  return YearMonth{index / 12, index % 12 + 1};
}

}  // namespace twintower
