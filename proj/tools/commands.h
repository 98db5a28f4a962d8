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

#ifndef TWINTOWER_TOOLS_COMMANDS_H_
#define TWINTOWER_TOOLS_COMMANDS_H_

#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "run_config.h"

namespace twintower::cli {

// Every artifact is wrapped as {"command", "config", "inputs", "result"}.

// Writes a synthetic corpus to out_dir plus synthetic_report.json.
void CmdGenerate(const RunConfig& config);

// Trains on data_dir; writes the checkpoint and loss_trace.json.
void CmdTrain(const RunConfig& config);

// Scores the checkpoint on data_dir; writes eval_<mode>.json and .txt, and
// with --baseline random also the baseline report and lifts.
void CmdEvaluate(const RunConfig& config);

// Trains and scores every ablation row; writes ablation.json and .txt.
void CmdAblate(const RunConfig& config);

// Writes attention.json for an attention-mode checkpoint.
void CmdExportAttention(const RunConfig& config);

// SHA-256 of each dataset file present in `dir`, keyed by file name.
std::map<std::string, std::string> DatasetDigests(
    const std::filesystem::path& dir);

}  // namespace twintower::cli

#endif  // TWINTOWER_TOOLS_COMMANDS_H_
