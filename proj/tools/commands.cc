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

#include "commands.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "twintower/data/dataset.h"
#include "twintower/error.h"
#include "twintower/eval/metrics.h"
#include "twintower/training/checkpoint.h"
#include "twintower/training/corpus.h"
#include "twintower/util/digest.h"

namespace twintower::cli {
namespace {

using nlohmann::json;

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

void WriteJson(const std::filesystem::path& path, const json& j) {
  WriteText(path, j.dump(2) + "\n");
  spdlog::info("wrote {}", path.string());
}

json Envelope(const std::string& command, const RunConfig& config,
              const json& inputs, json result) {
  return {{"command", command},
          {"config", config.ToJson()},
          {"inputs", inputs},
          {"result", std::move(result)}};
}

struct LoadedData {
  training::PreparedCorpus corpus;
  json digests;
};

LoadedData LoadData(const RunConfig& config) {
  data::IngestReport report;
  data::Dataset ds =
      data::Ingest(data::DatasetPaths::InDirectory(config.data_dir), &report);
  if (report.dropped_unknown_item + report.dropped_unknown_user > 0) {
    spdlog::warn("dropped {} interactions with unknown items and {} with "
                 "unknown users",
                 report.dropped_unknown_item, report.dropped_unknown_user);
  }
  auto corpus =
      training::PreparedCorpus::Build(ds, config.split, config.schema);
  return {std::move(corpus), json(DatasetDigests(config.data_dir))};
}

training::TrainedModel TrainModel(const RunConfig& config,
                                  const model::ModelConfig& model_config,
                                  const training::PreparedCorpus& corpus) {
  training::TrainedModel trained =
      training::Train(corpus, model_config, config.train);
  for (std::size_t e = 0; e < trained.trace.epoch_loss.size(); ++e) {
    spdlog::info("{} epoch {} loss {:.6f}", model_config.fusion.Label(), e + 1,
                 trained.trace.epoch_loss[e]);
  }
  return trained;
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string Pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::map<std::string, std::string> DatasetDigests(
    const std::filesystem::path& dir) {
  data::DatasetPaths p = data::DatasetPaths::InDirectory(dir);
  std::map<std::string, std::string> out;
  for (const auto* path :
       {&p.metadata, &p.interactions, &p.users, &p.word_vectors, &p.coverart}) {
    if (std::filesystem::exists(*path)) {
      out[path->filename().string()] = util::FileSha256Hex(*path);
    }
  }
  return out;
}

void CmdGenerate(const RunConfig& config) {
  data::SyntheticCorpus corpus = data::GenerateSynthetic(config.synthetic);
  data::WriteDataset(corpus.dataset, config.out_dir);
  json result = corpus.report;
  result["cold_item_ids"] = corpus.cold_items;
  WriteJson(config.out_dir / "synthetic_report.json",
            Envelope("generate", config, json(DatasetDigests(config.out_dir)),
                     result));
  spdlog::info("generated {} users, {} items, {} interactions, density {:.4f}",
               corpus.dataset.users.size(), corpus.dataset.items.size(),
               corpus.dataset.interactions.size(),
               corpus.report.at("training_density").get<double>());
}

void CmdTrain(const RunConfig& config) {
  LoadedData data = LoadData(config);
  training::TrainedModel trained =
      TrainModel(config, config.model, data.corpus);
  std::filesystem::create_directories(config.out_dir);
  training::CheckpointMeta meta;
  meta.schema_hash = data.corpus.SchemaHash();
  meta.id_items = data.corpus.id_item_ids();
  meta.train = config.train;
  meta.epoch_loss = trained.trace.epoch_loss;
  meta.run = {{"config", config.ToJson()}, {"inputs", data.digests}};
  std::filesystem::path ckpt = config.CheckpointPath();
  if (ckpt.has_parent_path()) std::filesystem::create_directories(ckpt.parent_path());
  training::SaveCheckpoint(ckpt, trained.model, trained.adam, meta);
  spdlog::info("wrote {}", ckpt.string());
  WriteJson(config.out_dir / "loss_trace.json",
            Envelope("train", config, data.digests,
                     {{"epoch_loss", trained.trace.epoch_loss},
                      {"examples_per_epoch", trained.trace.examples_per_epoch},
                      {"checkpoint", ckpt.string()},
                      {"checkpoint_sha256", util::FileSha256Hex(ckpt)}}));
}

void CmdEvaluate(const RunConfig& config) {
  LoadedData data = LoadData(config);
  std::filesystem::path ckpt_path = config.CheckpointPath();
  training::Checkpoint ckpt = training::LoadCheckpoint(ckpt_path);
  training::RequireSchemaMatch(ckpt.meta, data.corpus.SchemaHash());
  json inputs = data.digests;
  inputs[ckpt_path.filename().string()] = util::FileSha256Hex(ckpt_path);

  eval::EvalReport report = eval::Evaluate(ckpt.model, data.corpus, config.eval);
  if (report.status == "empty") {
    spdlog::warn("no {} candidates in the dataset; report is empty",
                 report.mode);
  }
  std::filesystem::create_directories(config.out_dir);
  std::string stem = "eval_" + report.mode;
  json result{{"model", ckpt.model.config().fusion.Label()},
              {"report", report.ToJson()}};
  std::string table = report.ToTable();
  if (config.baseline == "random" && report.status == "ok") {
    eval::EvalReport base =
        eval::EvaluateRandom(data.corpus, config.eval, config.seed);
    result["baseline"] = base.ToJson();
    result["lift_percent"] = eval::LiftToJson(eval::Lift(report, base));
    table += "\nrandom baseline\n" + base.ToTable();
  }
  WriteJson(config.out_dir / (stem + ".json"),
            Envelope("evaluate", config, inputs, result));
  WriteText(config.out_dir / (stem + ".txt"), table);
  std::fputs(table.c_str(), stdout);
}

void CmdAblate(const RunConfig& config) {
  LoadedData data = LoadData(config);
  std::vector<eval::EvalReport> reports;
  json rows = json::array();
  std::size_t baseline_index = 0;
  for (std::size_t r = 0; r < config.ablation_rows.size(); ++r) {
    const AblationRow& row = config.ablation_rows[r];
    if (row.label == config.ablation_baseline) baseline_index = r;
    model::ModelConfig mc = config.model;
    mc.fusion = row.fusion;
    mc.unit_attention = false;
    spdlog::info("ablation row {}/{}: {}", r + 1, config.ablation_rows.size(),
                 row.label);
    training::TrainedModel trained = TrainModel(config, mc, data.corpus);
    reports.push_back(eval::Evaluate(trained.model, data.corpus, config.eval));
    rows.push_back({{"label", row.label},
                    {"fusion", row.fusion.Label()},
                    {"epoch_loss", trained.trace.epoch_loss},
                    {"report", reports.back().ToJson()}});
  }
  const eval::EvalReport& base = reports[baseline_index];
  std::ostringstream table;
  table << "ablation (" << eval::CandidatePolicyName(config.eval.policy)
        << ", K=" << config.eval.k << ", baseline " << config.ablation_baseline
        << ")\n";
  table << Pad("row", 16);
  for (ItemCategory c : kAllCategories) {
    for (const char* m : {"P", "R", "Cov", "ConCov"}) {
      table << Pad(std::string(CategoryName(c)).substr(0, 1) + ":" + m + "@" +
                       std::to_string(config.eval.k),
                   12);
    }
  }
  table << "\n";
  std::ostringstream lifts;
  lifts << "\nlift over " << config.ablation_baseline << " (%)\n";
  for (std::size_t r = 0; r < reports.size(); ++r) {
    eval::LiftTable lift = eval::Lift(reports[r], base);
    rows[r]["lift_percent"] = eval::LiftToJson(lift);
    table << Pad(config.ablation_rows[r].label, 16);
    lifts << Pad(config.ablation_rows[r].label, 16);
    for (ItemCategory c : kAllCategories) {
      const eval::CategoryMetrics& m = reports[r].categories.at(c);
      table << Pad(Fixed(m.precision, 4), 12) << Pad(Fixed(m.recall, 4), 12)
            << Pad(std::to_string(m.coverage), 12)
            << Pad(std::to_string(m.converted_coverage), 12);
      for (const char* name : eval::kMetricNames) {
        const auto& cell = lift.at(c).at(name);
        lifts << Pad(cell ? Fixed(*cell, 1) : "n/a", 12);
      }
    }
    table << "\n";
    lifts << "\n";
  }
  std::string text = table.str() + lifts.str();
  std::filesystem::create_directories(config.out_dir);
  WriteJson(config.out_dir / "ablation.json",
            Envelope("ablate", config, data.digests,
                     {{"baseline_row", config.ablation_baseline},
                      {"rows", rows}}));
  WriteText(config.out_dir / "ablation.txt", text);
  std::fputs(text.c_str(), stdout);
}

void CmdExportAttention(const RunConfig& config) {
  LoadedData data = LoadData(config);
  std::filesystem::path ckpt_path = config.CheckpointPath();
  training::Checkpoint ckpt = training::LoadCheckpoint(ckpt_path);
  training::RequireSchemaMatch(ckpt.meta, data.corpus.SchemaHash());
  json inputs = data.digests;
  inputs[ckpt_path.filename().string()] = util::FileSha256Hex(ckpt_path);
  json result = eval::AttentionDistribution(ckpt.model, data.corpus);
  std::filesystem::create_directories(config.out_dir);
  WriteJson(config.out_dir / "attention.json",
            Envelope("export-attention", config, inputs, result));
}

}  // namespace twintower::cli
