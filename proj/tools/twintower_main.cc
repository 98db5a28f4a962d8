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

// twintower generate | train | evaluate | ablate | export-attention
//
// Exit codes: 0 success, 1 internal error, 2 bad input or configuration.

#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.h"
#include "run_config.h"
#include "twintower/error.h"

namespace {

using twintower::cli::Overrides;
using twintower::cli::RunConfig;

constexpr int kExitInternal = 1;
constexpr int kExitBadInput = 2;

struct Flags {
  std::string config;
  std::string seed;
  std::string mode;
  std::string fusion;
  std::string channels;
  std::string with_id;
  std::string baseline;
  std::string out;
  std::string data;
  std::string checkpoint;
  bool quiet = false;
};

void AddCommonFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("--seed", f.seed, "run seed");
  cmd->add_option("--mode", f.mode, "candidate policy: warm|cold");
  cmd->add_option("--fusion", f.fusion, "fusion mode: att|con");
  cmd->add_option("--channels", f.channels,
                  "comma list of synopsis,coverart,categorical,id");
  cmd->add_option("--with-id", f.with_id, "include the ID channel: true|false");
  cmd->add_option("--baseline", f.baseline, "baseline to report: random");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--data", f.data, "dataset directory");
  cmd->add_option("--checkpoint", f.checkpoint, "checkpoint path");
  cmd->add_flag("-q,--quiet", f.quiet, "only log warnings");
}

RunConfig Resolve(const Flags& f) {
  RunConfig config;
  if (!f.config.empty()) config = twintower::cli::LoadRunConfig(f.config);
  Overrides o;
  if (!f.seed.empty()) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(f.seed, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != f.seed.size() || f.seed.front() == '-') {
      throw twintower::InputError("--seed must be a nonnegative integer, got '" +
                                  f.seed + "'");
    }
    o.seed = v;
  }
  if (!f.mode.empty()) o.mode = f.mode;
  if (!f.fusion.empty()) o.fusion = f.fusion;
  if (!f.channels.empty()) o.channels = f.channels;
  if (!f.with_id.empty()) o.with_id = twintower::cli::ParseBool(f.with_id);
  if (!f.baseline.empty()) o.baseline = f.baseline;
  if (!f.out.empty()) o.out_dir = f.out;
  if (!f.data.empty()) o.data_dir = f.data;
  if (!f.checkpoint.empty()) o.checkpoint = f.checkpoint;
  twintower::cli::ApplyOverrides(o, config);
  config.Resolve();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("twintower"));
  spdlog::set_pattern("[%H:%M:%S] %^%l%$ %v");

  CLI::App app{"Two-tower video recommender with attention fusion"};
  app.require_subcommand(1);
  Flags flags;
  const std::map<std::string, std::pair<std::string,
                                        std::function<void(const RunConfig&)>>>
      commands = {
          {"generate",
           {"write a seeded synthetic corpus to --out",
            twintower::cli::CmdGenerate}},
          {"train",
           {"train on --data and write a checkpoint", twintower::cli::CmdTrain}},
          {"evaluate",
           {"score a checkpoint on --data", twintower::cli::CmdEvaluate}},
          {"ablate",
           {"train and score every fusion/channel row",
            twintower::cli::CmdAblate}},
          {"export-attention",
           {"dump attention weight distributions",
            twintower::cli::CmdExportAttention}},
      };
  for (const auto& [name, entry] : commands) {
    AddCommonFlags(app.add_subcommand(name, entry.first), flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }
  if (flags.quiet) spdlog::set_level(spdlog::level::warn);

  try {
    RunConfig config = Resolve(flags);
    for (const auto& [name, entry] : commands) {
      if (app.got_subcommand(name)) entry.second(config);
    }
  } catch (const twintower::InputError& e) {
    spdlog::error("{}", e.what());
    return kExitBadInput;
  } catch (const std::exception& e) {
    spdlog::error("internal error: {}", e.what());
    return kExitInternal;
  }
  return 0;
}
