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

#include "twintower/data/synthetic.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>
#include <unordered_set>

#include "twintower/error.h"
#include "twintower/features/coverart.h"

namespace twintower::data {
namespace {

constexpr std::size_t kGenreWords = 20;
constexpr std::size_t kCommonWords = 80;
constexpr std::size_t kGenreCast = 30;
constexpr std::size_t kGlobalCast = 60;
constexpr int kRecentDays = 60;

std::string Numbered(const std::string& prefix, std::size_t n, int width = 4) {
  std::string digits = std::to_string(n);
  if (static_cast<int>(digits.size()) < width) {
    digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  }
  return prefix + digits;
}

std::string GenreTag(std::size_t g) { return Numbered("genre_", g, 2); }

std::string GenreWord(std::size_t g, std::size_t k) {
  return "g" + std::to_string(g) + "w" + std::to_string(k);
}

YearMonth MonthOf(std::int64_t ts) {
  // Civil-from-days, valid for the proleptic Gregorian calendar.
  std::int64_t z = ts / eval::kSecondsPerDay + 719468;
  std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  std::int64_t doe = z - era * 146097;
  std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  std::int64_t y = yoe + era * 400;
  std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  std::int64_t mp = (5 * doy + 2) / 153;
  std::int64_t m = mp < 10 ? mp + 3 : mp - 9;
  if (m <= 2) ++y;
  return YearMonth{static_cast<int>(y), static_cast<int>(m)};
}

// Draws an index with probability proportional to weights; -1 if all zero.
std::ptrdiff_t DrawWeighted(const std::vector<double>& weights,
                            std::mt19937_64& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) return -1;
  double r = std::uniform_real_distribution<double>(0.0, total)(rng);
  double acc = 0.0;
  std::ptrdiff_t last = -1;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last = static_cast<std::ptrdiff_t>(i);
    if (r < acc) return last;
  }
  return last;
}

}  // namespace

eval::SplitConfig SyntheticSpec::Split() const {
  return eval::SplitConfig::Days(eval::kSyntheticEpoch, input_days,
                                 train_label_days, score_label_days);
}

void to_json(nlohmann::json& j, const SyntheticSpec& s) {
  j = nlohmann::json{{"users", s.users},
                     {"items", s.items},
                     {"genres", s.genres},
                     {"preference_sharpness", s.preference_sharpness},
                     {"watch_intensity", s.watch_intensity},
                     {"label_window_intensity", s.label_window_intensity},
                     {"cold_start_fraction", s.cold_start_fraction},
                     {"cold_novelty", s.cold_novelty},
                     {"coverart_signal", s.coverart_signal},
                     {"countries", s.countries},
                     {"word_dimension", s.word_dimension},
                     {"coverart_dimension", s.coverart_dimension},
                     {"input_days", s.input_days},
                     {"train_label_days", s.train_label_days},
                     {"score_label_days", s.score_label_days},
                     {"seed", s.seed}};
}

void from_json(const nlohmann::json& j, SyntheticSpec& s) {
  SyntheticSpec d;
  s.users = j.value("users", d.users);
  s.items = j.value("items", d.items);
  s.genres = j.value("genres", d.genres);
  s.preference_sharpness = j.value("preference_sharpness", d.preference_sharpness);
  s.watch_intensity = j.value("watch_intensity", d.watch_intensity);
  s.label_window_intensity =
      j.value("label_window_intensity", d.label_window_intensity);
  s.cold_start_fraction = j.value("cold_start_fraction", d.cold_start_fraction);
  s.cold_novelty = j.value("cold_novelty", d.cold_novelty);
  s.coverart_signal = j.value("coverart_signal", d.coverart_signal);
  s.countries = j.value("countries", d.countries);
  s.word_dimension = j.value("word_dimension", d.word_dimension);
  s.coverart_dimension = j.value("coverart_dimension", d.coverart_dimension);
  s.input_days = j.value("input_days", d.input_days);
  s.train_label_days = j.value("train_label_days", d.train_label_days);
  s.score_label_days = j.value("score_label_days", d.score_label_days);
  s.seed = j.value("seed", d.seed);
}

SyntheticCorpus GenerateSynthetic(const SyntheticSpec& spec) {
  if (spec.users == 0 || spec.items == 0 || spec.genres == 0) {
    throw InputError("synthetic spec needs users, items and genres");
  }
  if (spec.coverart_signal < 0.0 || spec.coverart_signal > 1.0) {
    throw InputError("coverart_signal must lie in [0, 1]");
  }
  if (spec.cold_start_fraction < 0.0 || spec.cold_start_fraction >= 1.0) {
    throw InputError("cold_start_fraction must lie in [0, 1)");
  }
  std::mt19937_64 rng(spec.seed);
  auto uniform_index = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  auto coin = [&](double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
  };

  SyntheticCorpus out;
  out.split = spec.Split();
  const eval::SplitConfig& split = out.split;
  Dataset& ds = out.dataset;

  // Word vectors: genre words cluster around a per-genre centroid.
  ds.words = features::WordVectorTable(spec.word_dimension);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random_vector = [&](double scale) {
    std::vector<double> v(spec.word_dimension);
    for (double& x : v) x = scale * normal(rng);
    return v;
  };
  std::vector<std::string> common_words;
  for (std::size_t k = 0; k < kCommonWords; ++k) {
    common_words.push_back("common" + std::to_string(k));
    ds.words.Add(common_words.back(), random_vector(0.1));
  }
  for (std::size_t g = 0; g < spec.genres; ++g) {
    std::vector<double> centroid = random_vector(0.1);
    for (std::size_t k = 0; k < kGenreWords; ++k) {
      std::vector<double> v = random_vector(0.03);
      for (std::size_t j = 0; j < v.size(); ++j) v[j] += centroid[j];
      ds.words.Add(GenreWord(g, k), std::move(v));
    }
  }

  // Items.
  std::size_t n_cold = static_cast<std::size_t>(
      std::llround(spec.cold_start_fraction * static_cast<double>(spec.items)));
  std::vector<std::size_t> by_category[2];
  for (std::size_t i = 0; i < spec.items; ++i) by_category[i % 2].push_back(i);
  std::vector<bool> is_cold(spec.items, false);
  for (std::size_t c = 0; c < 2; ++c) {
    std::vector<std::size_t> pool = by_category[c];
    std::shuffle(pool.begin(), pool.end(), rng);
    std::size_t take = std::min(pool.size(), (n_cold + (c == 0 ? 1 : 0)) / 2);
    for (std::size_t k = 0; k < take; ++k) is_cold[pool[k]] = true;
  }
  YearMonth cold_month = MonthOf(split.score_label.begin);
  std::vector<std::size_t> item_genre(spec.items);
  for (std::size_t i = 0; i < spec.items; ++i) {
    ItemMetadataRecord r;
    r.item_id = Numbered("item_", i);
    r.category = i % 2 == 0 ? ItemCategory::kMovie : ItemCategory::kSeries;
    std::size_t g = (i / 2) % spec.genres;
    item_genre[i] = g;
    r.genres = {GenreTag(g), GenreTag(g) + "_sub" + std::to_string(uniform_index(3))};
    std::size_t n_cast = 2 + uniform_index(3);
    std::set<std::string> cast;
    while (cast.size() < n_cast) {
      if (coin(0.7)) {
        cast.insert("cast_" + std::to_string(g) + "_" +
                    std::to_string(uniform_index(kGenreCast)));
      } else {
        cast.insert("cast_x_" + std::to_string(uniform_index(kGlobalCast)));
      }
    }
    r.cast.assign(cast.begin(), cast.end());
    r.maturity = "M" + std::to_string(uniform_index(17));
    r.country = "C" + std::to_string(uniform_index(30));
    r.release_year = 1980 + static_cast<int>(uniform_index(40));
    r.acquisition_month =
        is_cold[i] ? cold_month
                   : YearMonth{2018 + static_cast<int>(uniform_index(2)),
                               1 + static_cast<int>(uniform_index(12))};
    std::size_t n_words = 10 + uniform_index(7);
    for (std::size_t k = 0; k < n_words; ++k) {
      if (k > 0) r.synopsis += ' ';
      r.synopsis += coin(0.5) ? GenreWord(g, uniform_index(kGenreWords))
                              : common_words[uniform_index(kCommonWords)];
    }
    ds.items.push_back(std::move(r));
    out.item_genre[ds.items.back().item_id] = g;
    if (is_cold[i]) out.cold_items.insert(ds.items.back().item_id);
  }
  ds.coverart = features::CoverArtStore(spec.coverart_dimension);
  std::vector<std::vector<double>> genre_art;
  for (std::size_t g = 0; g < spec.genres; ++g) {
    genre_art.push_back(features::PseudoCoverArt(GenreTag(g), spec.seed,
                                                 spec.coverart_dimension));
  }
  const double noise_weight =
      std::sqrt(1.0 - spec.coverart_signal * spec.coverart_signal);
  for (std::size_t i = 0; i < spec.items; ++i) {
    const std::string& id = ds.items[i].item_id;
    std::vector<double> art =
        features::PseudoCoverArt(id, spec.seed, spec.coverart_dimension);
    if (spec.coverart_signal > 0.0) {
      const auto& dir = genre_art[item_genre[i]];
      double norm = 0.0;
      for (std::size_t k = 0; k < art.size(); ++k) {
        art[k] = spec.coverart_signal * dir[k] + noise_weight * art[k];
        norm += art[k] * art[k];
      }
      norm = std::sqrt(norm);
      if (norm > 0.0) {
        for (double& v : art) v /= norm;
      }
    }
    ds.coverart.Ingest(id, std::move(art));
  }

  // Users and watches.
  const std::int64_t history_end = split.score_label.begin;
  const std::int64_t history_begin = split.train_input.begin;
  std::vector<std::vector<double>> affinity(spec.users);
  std::vector<std::vector<std::int64_t>> first_watch(
      spec.users, std::vector<std::int64_t>(spec.items, -1));
  for (std::size_t u = 0; u < spec.users; ++u) {
    UserProfile profile;
    profile.user_id = Numbered("user_", u);
    profile.features["country"] = "C" + std::to_string(uniform_index(spec.countries));
    std::size_t fav = uniform_index(spec.genres);
    out.user_favourite[profile.user_id] = fav;
    affinity[u].assign(spec.genres, 1.0);
    affinity[u][fav] += spec.preference_sharpness;
    ds.users.push_back(std::move(profile));
  }

  auto watch = [&](std::size_t u, std::size_t i, std::int64_t ts) {
    first_watch[u][i] = ts;
    ds.interactions.push_back({ds.users[u].user_id, ds.items[i].item_id, ts});
  };
  std::uniform_int_distribution<std::int64_t> history_ts(history_begin,
                                                         history_end - 1);
  std::uniform_int_distribution<std::int64_t> label_ts(split.score_label.begin,
                                                       split.score_label.end - 1);
  std::vector<double> weights(spec.items);
  for (std::size_t u = 0; u < spec.users; ++u) {
    std::size_t n = std::poisson_distribution<std::size_t>(spec.watch_intensity)(rng);
    for (std::size_t i = 0; i < spec.items; ++i) {
      weights[i] = is_cold[i] ? 0.0 : affinity[u][item_genre[i]];
    }
    for (std::size_t k = 0; k < n; ++k) {
      std::ptrdiff_t pick = DrawWeighted(weights, rng);
      if (pick < 0) break;
      watch(u, static_cast<std::size_t>(pick), history_ts(rng));
      weights[static_cast<std::size_t>(pick)] = 0.0;
    }
  }
  std::vector<bool> seen_before(spec.items, false);
  for (std::size_t u = 0; u < spec.users; ++u) {
    for (std::size_t i = 0; i < spec.items; ++i) {
      if (first_watch[u][i] >= 0) seen_before[i] = true;
    }
  }
  for (std::size_t u = 0; u < spec.users; ++u) {
    std::size_t n =
        std::poisson_distribution<std::size_t>(spec.label_window_intensity)(rng);
    for (std::size_t i = 0; i < spec.items; ++i) {
      bool eligible = first_watch[u][i] < 0 && (is_cold[i] || seen_before[i]);
      weights[i] = eligible ? affinity[u][item_genre[i]] *
                                  (is_cold[i] ? spec.cold_novelty : 1.0)
                            : 0.0;
    }
    for (std::size_t k = 0; k < n; ++k) {
      std::ptrdiff_t pick = DrawWeighted(weights, rng);
      if (pick < 0) break;
      watch(u, static_cast<std::size_t>(pick), label_ts(rng));
      weights[static_cast<std::size_t>(pick)] = 0.0;
    }
  }
  // Every designated cold item needs a watch in Y' to be cold by rule.
  for (std::size_t i = 0; i < spec.items; ++i) {
    if (!is_cold[i]) continue;
    bool watched = false;
    for (std::size_t u = 0; u < spec.users && !watched; ++u) {
      watched = first_watch[u][i] >= 0;
    }
    if (watched) continue;
    std::vector<double> user_weights(spec.users);
    for (std::size_t u = 0; u < spec.users; ++u) {
      user_weights[u] = affinity[u][item_genre[i]];
    }
    auto u = static_cast<std::size_t>(DrawWeighted(user_weights, rng));
    watch(u, i, label_ts(rng));
  }
  std::sort(ds.interactions.begin(), ds.interactions.end(),
            [](const Interaction& a, const Interaction& b) {
              return std::tie(a.ts, a.user_id, a.item_id) <
                     std::tie(b.ts, b.user_id, b.item_id);
            });

  // Popularity from the training period only.
  const std::int64_t train_end = split.train_label.end;
  const std::int64_t recent_begin = train_end - kRecentDays * eval::kSecondsPerDay;
  std::map<std::string, std::size_t> item_index;
  for (std::size_t i = 0; i < ds.items.size(); ++i) {
    item_index[ds.items[i].item_id] = i;
  }
  std::size_t train_watches = 0;
  for (const auto& row : ds.interactions) {
    if (row.ts < split.train_input.begin || row.ts >= train_end) continue;
    ++train_watches;
    auto& item = ds.items[item_index.at(row.item_id)];
    ++item.view_count_long;
    if (row.ts >= recent_begin) ++item.view_count_recent;
  }

  std::size_t cold_movies = 0;
  for (const auto& id : out.cold_items) {
    if (ds.items[item_index.at(id)].category == ItemCategory::kMovie) ++cold_movies;
  }
  out.report = nlohmann::json{
      {"spec", spec},
      {"users", spec.users},
      {"items", spec.items},
      {"interactions", ds.interactions.size()},
      {"training_watches", train_watches},
      {"training_density", Density(train_watches, spec.users, spec.items)},
      {"cold_items", {{"movie", cold_movies},
                      {"series", out.cold_items.size() - cold_movies}}},
      {"split", split},
  };
  return out;
}

}  // namespace twintower::data
