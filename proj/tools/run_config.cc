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

#include "run_config.h"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "twintower/error.h"

namespace twintower::cli {
namespace {

using model::Channel;
using model::FusionKind;
using model::FusionMode;

FusionMode Mode(FusionKind kind, std::vector<Channel> channels) {
  FusionMode m{kind, std::move(channels)};
  m.Normalize();
  return m;
}

std::vector<Channel> ParseChannelList(std::string_view text) {
  std::vector<Channel> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view name = text.substr(start, comma - start);
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front()))) {
      name.remove_prefix(1);
    }
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) {
      name.remove_suffix(1);
    }
    if (!name.empty()) out.push_back(model::ParseChannel(name));
    start = comma + 1;
  }
  if (out.empty()) throw InputError("--channels needs at least one channel");
  return out;
}

// A split section is either explicit windows or the day-count layout.
eval::SplitConfig SplitFromJson(const nlohmann::json& j) {
  if (j.contains("train_input")) return j.get<eval::SplitConfig>();
  return eval::SplitConfig::Days(
      j.value("origin", eval::kSyntheticEpoch), j.value("input_days", 300),
      j.value("train_label_days", 14), j.value("score_label_days", 7));
}

}  // namespace

void to_json(nlohmann::json& j, const AblationRow& r) {
  std::vector<std::string> channels;
  for (Channel c : r.fusion.channels) channels.emplace_back(model::ChannelName(c));
  j = nlohmann::json{{"label", r.label},
                     {"fusion", model::FusionKindName(r.fusion.kind)},
                     {"channels", channels}};
}

void from_json(const nlohmann::json& j, AblationRow& r) {
  r.fusion.kind = model::ParseFusionKind(j.value("fusion", std::string("att")));
  r.fusion.channels.clear();
  for (const auto& c : j.at("channels")) {
    r.fusion.channels.push_back(model::ParseChannel(c.get<std::string>()));
  }
  r.fusion.Normalize();
  r.label = j.value("label", r.fusion.Label());
}

std::vector<AblationRow> DefaultAblationRows() {
  const std::vector<Channel> meta = {Channel::kCategorical, Channel::kSynopsis,
                                     Channel::kCoverart};
  std::vector<Channel> all = meta;
  all.push_back(Channel::kId);
  return {
      {"synopsis", Mode(FusionKind::kConcatenation, {Channel::kSynopsis})},
      {"coverart", Mode(FusionKind::kConcatenation, {Channel::kCoverart})},
      {"categorical", Mode(FusionKind::kConcatenation, {Channel::kCategorical})},
      {"id", Mode(FusionKind::kConcatenation, {Channel::kId})},
      {"con_without_id", Mode(FusionKind::kConcatenation, meta)},
      {"att_without_id", Mode(FusionKind::kAttention, meta)},
      {"con_with_id", Mode(FusionKind::kConcatenation, all)},
      {"att_with_id", Mode(FusionKind::kAttention, all)},
  };
}

std::filesystem::path RunConfig::CheckpointPath() const {
  return checkpoint.empty() ? out_dir / "model.ttwr" : checkpoint;
}

void RunConfig::Resolve() {
  train.seed = seed;
  synthetic.seed = seed;
  model.fusion.Normalize();
  split.Validate();
  train.Validate();
  eval.Validate();
  if (model.embedding_dim == 0 || model.attention_width == 0) {
    throw InputError("model widths must be positive");
  }
  if (model.history_length == 0) {
    throw InputError("history_length must be positive");
  }
  if (!baseline.empty() && baseline != "random") {
    throw InputError("unknown baseline '" + baseline + "' (expected random)");
  }
  if (ablation_rows.empty()) throw InputError("ablation grid has no rows");
  bool found = std::any_of(ablation_rows.begin(), ablation_rows.end(),
                           [&](const AblationRow& r) {
                             return r.label == ablation_baseline;
                           });
  if (!found) {
    throw InputError("ablation baseline row '" + ablation_baseline +
                     "' is not in the grid");
  }
}

nlohmann::json RunConfig::ToJson() const {
  return {{"data_dir", data_dir.string()},
          {"out_dir", out_dir.string()},
          {"checkpoint", CheckpointPath().string()},
          {"seed", seed},
          {"baseline", baseline},
          {"synthetic", synthetic},
          {"split", split},
          {"schema", schema},
          {"model", model},
          {"train", train},
          {"eval", eval},
          {"ablation", {{"rows", ablation_rows},
                        {"baseline", ablation_baseline}}}};
}

RunConfig RunConfig::FromJson(const nlohmann::json& j) {
  RunConfig c;
  try {
    if (!j.is_object()) throw InputError("config must be a JSON object");
    if (j.contains("data_dir")) c.data_dir = j.at("data_dir").get<std::string>();
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("checkpoint")) {
      c.checkpoint = j.at("checkpoint").get<std::string>();
    }
    c.seed = j.value("seed", c.seed);
    c.baseline = j.value("baseline", c.baseline);
    if (j.contains("synthetic")) c.synthetic = j.at("synthetic").get<data::SyntheticSpec>();
    if (j.contains("split")) c.split = SplitFromJson(j.at("split"));
    if (j.contains("schema")) c.schema = j.at("schema").get<features::SchemaConfig>();
    if (j.contains("model")) c.model = j.at("model").get<model::ModelConfig>();
    if (j.contains("train")) c.train = j.at("train").get<training::TrainConfig>();
    if (j.contains("eval")) c.eval = j.at("eval").get<eval::EvalConfig>();
    if (j.contains("ablation")) {
      const auto& a = j.at("ablation");
      if (a.contains("rows")) {
        c.ablation_rows = a.at("rows").get<std::vector<AblationRow>>();
      }
      c.ablation_baseline = a.value("baseline", c.ablation_baseline);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad config: ") + e.what());
  }
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  try {
    return RunConfig::FromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

bool ParseBool(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw InputError("expected a boolean, got '" + std::string(text) + "'");
}

void ApplyOverrides(const Overrides& o, RunConfig& config) {
  if (o.seed) config.seed = *o.seed;
  if (o.mode) config.eval.policy = eval::ParseCandidatePolicy(*o.mode);
  if (o.fusion) config.model.fusion.kind = model::ParseFusionKind(*o.fusion);
  if (o.channels) {
    bool had_id = config.model.fusion.Has(Channel::kId);
    config.model.fusion.channels = ParseChannelList(*o.channels);
    if (had_id && !o.with_id) config.model.fusion.channels.push_back(Channel::kId);
  }
  if (o.with_id) {
    auto& ch = config.model.fusion.channels;
    ch.erase(std::remove(ch.begin(), ch.end(), Channel::kId), ch.end());
    if (*o.with_id) ch.push_back(Channel::kId);
  }
  config.model.fusion.Normalize();
  if (o.baseline) config.baseline = *o.baseline;
  if (o.out_dir) config.out_dir = *o.out_dir;
  if (o.data_dir) config.data_dir = *o.data_dir;
  if (o.checkpoint) config.checkpoint = *o.checkpoint;
}

}  // namespace twintower::cli
