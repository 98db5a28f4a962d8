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

#include "twintower/eval/evaluator.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "twintower/error.h"
#include "twintower/training/trainer.h"
#include "twintower/util/parallel.h"

namespace twintower::eval {
namespace {

using training::PreparedCorpus;

struct CategoryView {
  ItemCategory category;
  std::vector<std::size_t> items;  // candidate positions
  std::vector<std::string> ids;
};

std::vector<CategoryView> Views(const PreparedCorpus& corpus,
                                CandidatePolicy policy) {
  std::vector<CategoryView> out;
  for (auto& [category, items] : Candidates(corpus, policy)) {
    CategoryView v{category, items, {}};
    for (std::size_t pos : items) v.ids.push_back(corpus.items()[pos].item_id);
    out.push_back(std::move(v));
  }
  return out;
}

// Candidate slots open to `user`: all of them, or those not watched in X'.
std::vector<std::size_t> EligibleSlots(const CategoryView& view,
                                       const training::UserRecord& user,
                                       const EvalConfig& config) {
  std::vector<std::size_t> slots;
  slots.reserve(view.items.size());
  bool filter =
      config.exclude_seen && config.policy == CandidatePolicy::kWarm;
  for (std::size_t s = 0; s < view.items.size(); ++s) {
    if (filter && std::binary_search(user.score_seen.begin(),
                                     user.score_seen.end(), view.items[s])) {
      continue;
    }
    slots.push_back(s);
  }
  return slots;
}

std::set<std::string> LabelsAmong(const CategoryView& view,
                                  const training::UserRecord& user) {
  std::set<std::string> out;
  for (std::size_t s = 0; s < view.items.size(); ++s) {
    if (std::binary_search(user.labels.begin(), user.labels.end(),
                           view.items[s])) {
      out.insert(view.ids[s]);
    }
  }
  return out;
}

EvalReport Assemble(const PreparedCorpus& corpus, const EvalConfig& config,
                    const std::vector<CategoryView>& views,
                    const std::vector<std::vector<UserOutcome>>& outcomes) {
  EvalReport report;
  report.k = config.k;
  report.mode = std::string(CandidatePolicyName(config.policy));
  report.density = corpus.training_density();
  bool any = false;
  for (std::size_t c = 0; c < views.size(); ++c) {
    CategoryMetrics m = ComputeMetrics(outcomes[c], config.k);
    m.candidates = views[c].items.size();
    any = any || m.candidates > 0;
    report.categories[views[c].category] = m;
  }
  report.status = any ? "ok" : "empty";
  return report;
}

}  // namespace

std::string_view CandidatePolicyName(CandidatePolicy p) {
  return p == CandidatePolicy::kWarm ? "warm" : "cold";
}

CandidatePolicy ParseCandidatePolicy(std::string_view name) {
  if (name == "warm") return CandidatePolicy::kWarm;
  if (name == "cold") return CandidatePolicy::kCold;
  throw InputError("unknown mode '" + std::string(name) +
                   "' (expected warm or cold)");
}

void EvalConfig::Validate() const {
  if (k < 1) throw InputError("K must be at least 1");
}

void to_json(nlohmann::json& j, const EvalConfig& c) {
  j = nlohmann::json{{"k", c.k},
                     {"mode", CandidatePolicyName(c.policy)},
                     {"exclude_seen", c.exclude_seen}};
}

void from_json(const nlohmann::json& j, EvalConfig& c) {
  EvalConfig d;
  c.k = j.value("k", d.k);
  c.policy = ParseCandidatePolicy(
      j.value("mode", std::string(CandidatePolicyName(d.policy))));
  c.exclude_seen = j.value("exclude_seen", d.exclude_seen);
}

std::map<ItemCategory, std::vector<std::size_t>> Candidates(
    const PreparedCorpus& corpus, CandidatePolicy policy) {
  std::map<ItemCategory, std::vector<std::size_t>> out;
  for (ItemCategory c : kAllCategories) out[c];
  if (policy == CandidatePolicy::kCold) {
    for (const auto& [category, items] : corpus.cold_items()) {
      out[category] = items;
    }
    return out;
  }
  for (std::size_t pos : corpus.warm_items()) {
    out[corpus.items()[pos].category].push_back(pos);
  }
  return out;
}

std::vector<std::size_t> ScoredUsers(const PreparedCorpus& corpus) {
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < corpus.users().size(); ++u) {
    if (!corpus.users()[u].score_history.empty()) out.push_back(u);
  }
  return out;
}

numerics::Tensor EmbedCandidates(const model::TwoTowerModel& model,
                                 const PreparedCorpus& corpus,
                                 std::span<const std::size_t> items,
                                 bool zero_id) {
  std::vector<features::EncodedItemFeatures> stripped;
  std::vector<const features::EncodedItemFeatures*> ptrs;
  if (zero_id) {
    stripped.reserve(items.size());
    for (std::size_t pos : items) {
      stripped.push_back(corpus.encoded()[pos]);
      stripped.back().id_index.reset();
    }
    for (const auto& f : stripped) ptrs.push_back(&f);
  } else {
    for (std::size_t pos : items) ptrs.push_back(&corpus.encoded()[pos]);
  }
  return model.EmbedItems(ptrs).embedding;
}

EvalReport Evaluate(const model::TwoTowerModel& model,
                    const PreparedCorpus& corpus, const EvalConfig& config) {
  config.Validate();
  if (model.dims() != corpus.dims()) {
    throw InputError("model dimensions do not match the corpus");
  }
  std::vector<CategoryView> views = Views(corpus, config.policy);
  std::vector<numerics::Tensor> item_emb;
  for (const auto& v : views) {
    item_emb.push_back(v.items.empty()
                           ? numerics::Tensor()
                           : EmbedCandidates(model, corpus, v.items,
                                             config.policy ==
                                                 CandidatePolicy::kCold));
  }
  std::vector<std::size_t> users = ScoredUsers(corpus);
  std::vector<std::vector<UserOutcome>> outcomes(
      views.size(), std::vector<UserOutcome>(users.size()));
  const std::size_t d = model.config().embedding_dim;
  std::size_t threads = config.threads > 0 ? config.threads
                                           : util::ScoringThreads();
  util::ParallelFor(users.size(), threads, [&](std::size_t n) {
    const training::UserRecord& user = corpus.users()[users[n]];
    numerics::Tensor u =
        model.EmbedUser(training::ScoringInput(user, model.config()));
    for (std::size_t c = 0; c < views.size(); ++c) {
      const CategoryView& view = views[c];
      if (view.items.empty()) continue;
      std::vector<std::size_t> slots = EligibleSlots(view, user, config);
      std::vector<double> scores;
      std::vector<std::string> ids;
      scores.reserve(slots.size());
      ids.reserve(slots.size());
      std::span<const double> emb = item_emb[c].values();
      for (std::size_t s : slots) {
        double dot = 0.0;
        for (std::size_t k = 0; k < d; ++k) dot += u[k] * emb[s * d + k];
        scores.push_back(dot);
        ids.push_back(view.ids[s]);
      }
      UserOutcome& out = outcomes[c][n];
      for (std::size_t r : RecommendTopK(scores, ids, config.k)) {
        out.recommended.push_back(ids[r]);
      }
      out.watched = LabelsAmong(view, user);
    }
  });
  return Assemble(corpus, config, views, outcomes);
}

EvalReport EvaluateRandom(const PreparedCorpus& corpus,
                          const EvalConfig& config, std::uint64_t seed) {
  config.Validate();
  std::vector<CategoryView> views = Views(corpus, config.policy);
  std::vector<std::size_t> users = ScoredUsers(corpus);
  std::vector<std::vector<UserOutcome>> outcomes(
      views.size(), std::vector<UserOutcome>(users.size()));
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < views.size(); ++c) {
    const CategoryView& view = views[c];
    if (view.items.empty()) continue;
    for (std::size_t n = 0; n < users.size(); ++n) {
      const training::UserRecord& user = corpus.users()[users[n]];
      std::vector<std::size_t> slots = EligibleSlots(view, user, config);
      UserOutcome& out = outcomes[c][n];
      if (!slots.empty()) {
        auto picks = RandomBaseline(1, slots.size(), config.k, rng).front();
        for (std::size_t p : picks) out.recommended.push_back(view.ids[slots[p]]);
      }
      out.watched = LabelsAmong(view, user);
    }
  }
  return Assemble(corpus, config, views, outcomes);
}

nlohmann::json AttentionDistribution(const model::TwoTowerModel& model,
                                     const PreparedCorpus& corpus) {
  const auto& config = model.config();
  if (config.fusion.kind != model::FusionKind::kAttention ||
      config.unit_attention) {
    throw InputError("attention export needs an attention-mode checkpoint, "
                     "got " + config.fusion.Label());
  }
  std::map<ItemCategory, std::vector<const features::EncodedItemFeatures*>>
      by_category;
  for (ItemCategory c : kAllCategories) by_category[c];
  for (std::size_t i = 0; i < corpus.items().size(); ++i) {
    by_category[corpus.items()[i].category].push_back(&corpus.encoded()[i]);
  }
  const auto& channels = config.fusion.channels;
  nlohmann::json out{{"bins", kAttentionBins},
                     {"range", {0.0, 1.0}},
                     {"fusion", config.fusion.Label()},
                     {"categories", nlohmann::json::object()}};
  for (const auto& [category, items] : by_category) {
    nlohmann::json cat{{"items", items.size()},
                       {"channels", nlohmann::json::object()}};
    std::vector<std::vector<double>> alpha(channels.size());
    if (!items.empty()) {
      model::ItemTowerOutput emb = model.EmbedItems(items);
      const numerics::Tensor& a = *emb.alpha;
      for (std::size_t r = 0; r < items.size(); ++r) {
        for (std::size_t m = 0; m < channels.size(); ++m) {
          alpha[m].push_back(a.at(r, m));
        }
      }
    }
    for (std::size_t m = 0; m < channels.size(); ++m) {
      std::vector<std::size_t> counts(kAttentionBins, 0);
      double sum = 0.0;
      for (double v : alpha[m]) {
        auto bin = static_cast<std::size_t>(
            std::floor(v * static_cast<double>(kAttentionBins)));
        ++counts[std::min(bin, kAttentionBins - 1)];
        sum += v;
      }
      nlohmann::json stats{{"counts", counts}};
      if (alpha[m].empty()) {
        stats["mean"] = nullptr;
        stats["median"] = nullptr;
      } else {
        std::vector<double> sorted = alpha[m];
        std::sort(sorted.begin(), sorted.end());
        std::size_t n = sorted.size();
        stats["mean"] = sum / static_cast<double>(n);
        stats["median"] = n % 2 == 1 ? sorted[n / 2]
                                     : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
      }
      cat["channels"][std::string(model::ChannelName(channels[m]))] = stats;
    }
    out["categories"][std::string(CategoryName(category))] = cat;
  }
  return out;
}

}  // namespace twintower::eval
