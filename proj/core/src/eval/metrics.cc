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

#include "twintower/eval/metrics.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "twintower/error.h"

namespace twintower::eval {

std::vector<std::size_t> RecommendTopK(std::span<const double> scores,
                                       std::span<const std::string> ids,
                                       std::size_t k) {
  if (scores.size() != ids.size()) {
    throw ShapeError("top-k: scores and ids differ in length");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return ids[a] < ids[b];
  };
  std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                    order.end(), better);
  order.resize(take);
  return order;
}

CategoryMetrics ComputeMetrics(std::span<const UserOutcome> outcomes,
                               std::size_t k) {
  if (k == 0) throw InputError("K must be at least 1");
  CategoryMetrics m;
  std::set<std::string> recommended, converted;
  double precision_sum = 0.0, recall_sum = 0.0;
  for (const UserOutcome& o : outcomes) {
    ++m.users_scored;
    std::size_t hits = 0;
    for (const auto& id : o.recommended) {
      recommended.insert(id);
      if (o.watched.contains(id)) {
        ++hits;
        converted.insert(id);
      }
    }
    if (o.watched.empty()) continue;
    ++m.users_with_labels;
    precision_sum += static_cast<double>(hits) / static_cast<double>(k);
    recall_sum +=
        static_cast<double>(hits) / static_cast<double>(o.watched.size());
  }
  if (m.users_with_labels > 0) {
    m.precision = precision_sum / static_cast<double>(m.users_with_labels);
    m.recall = recall_sum / static_cast<double>(m.users_with_labels);
  }
  m.coverage = recommended.size();
  m.converted_coverage = converted.size();
  return m;
}

double MetricValue(const CategoryMetrics& m, std::string_view name) {
  if (name == "precision") return m.precision;
  if (name == "recall") return m.recall;
  if (name == "coverage") return static_cast<double>(m.coverage);
  if (name == "converted_coverage") {
    return static_cast<double>(m.converted_coverage);
  }
  throw Error("unknown metric '" + std::string(name) + "'");
}

nlohmann::json EvalReport::ToJson() const {
  nlohmann::json cats = nlohmann::json::object();
  for (const auto& [category, m] : categories) {
    cats[std::string(CategoryName(category))] = {
        {"precision", m.precision},
        {"recall", m.recall},
        {"coverage", m.coverage},
        {"converted_coverage", m.converted_coverage},
        {"users_scored", m.users_scored},
        {"users_with_labels", m.users_with_labels},
        {"candidates", m.candidates}};
  }
  return {{"k", k},
          {"mode", mode},
          {"status", status},
          {"density", density},
          {"categories", cats}};
}

std::string EvalReport::ToTable() const {
  std::ostringstream out;
  char line[160];
  auto at_k = [this](const char* name) { return name + std::to_string(k); };
  std::snprintf(line, sizeof line, "%-8s %12s %12s %12s %12s %8s %10s\n",
                "category", at_k("P@").c_str(), at_k("R@").c_str(),
                at_k("Cov@").c_str(), at_k("ConCov@").c_str(), "users",
                "candidates");
  out << line;
  for (const auto& [category, m] : categories) {
    std::snprintf(line, sizeof line,
                  "%-8s %12.6f %12.6f %12zu %12zu %8zu %10zu\n",
                  std::string(CategoryName(category)).c_str(), m.precision,
                  m.recall, m.coverage, m.converted_coverage,
                  m.users_with_labels, m.candidates);
    out << line;
  }
  std::snprintf(line, sizeof line, "K=%zu mode=%s status=%s density=%.6f\n", k,
                mode.c_str(), status.c_str(), density);
  out << line;
  return out.str();
}

LiftTable Lift(const EvalReport& report, const EvalReport& baseline) {
  if (report.k != baseline.k) throw InputError("lift needs reports with equal K");
  LiftTable out;
  for (const auto& [category, m] : report.categories) {
    auto it = baseline.categories.find(category);
    if (it == baseline.categories.end()) {
      throw InputError("baseline report lacks category " +
                       std::string(CategoryName(category)));
    }
    for (const char* name : kMetricNames) {
      double b = MetricValue(it->second, name);
      double v = MetricValue(m, name);
      out[category][name] =
          b == 0.0 ? std::nullopt : std::optional<double>(100.0 * (v - b) / b);
    }
  }
  return out;
}

nlohmann::json LiftToJson(const LiftTable& lift) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [category, cells] : lift) {
    auto& row = j[std::string(CategoryName(category))];
    for (const auto& [name, value] : cells) {
      row[name] = value ? nlohmann::json(*value) : nlohmann::json("n/a");
    }
  }
  return j;
}

std::vector<std::vector<std::size_t>> RandomBaseline(std::size_t users,
                                                     std::size_t candidates,
                                                     std::size_t k,
                                                     std::mt19937_64& rng) {
  if (candidates == 0) throw InputError("random baseline needs candidates");
  std::size_t take = std::min(k, candidates);
  std::vector<std::size_t> pool(candidates);
  std::vector<std::vector<std::size_t>> out(users);
  for (auto& picks : out) {
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t j = 0; j < take; ++j) {
      std::uniform_int_distribution<std::size_t> pick(j, candidates - 1);
      std::swap(pool[j], pool[pick(rng)]);
    }
    picks.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
  }
  return out;
}

}  // namespace twintower::eval
