/* Copyright 2026 The ccphase Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

// Pipelines behind the command-line subcommands. Each takes a fully resolved
// configuration document (the same object stored in the run manifest), writes
// its artifacts into the context's output directory and returns the manifest.
// Feeding a manifest's "config" back in reproduces every numeric output.

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

namespace ccphase {

struct CommandContext {
  std::filesystem::path out_dir = ".";
  // Overrides for artifact paths, keyed by artifact name ("report", "chi", ...).
  std::map<std::string, std::filesystem::path> outputs;
  std::size_t threads = 0;
  std::size_t log_every = 10;  // generations between progress lines

  std::filesystem::path artifact(const std::string& name, const std::string& fallback) const;
};

// Output directory from CCPHASE_OUTPUT_DIR, else the working directory.
std::filesystem::path default_output_dir();

nlohmann::json cmd_simulate(const nlohmann::json& config, const CommandContext& ctx);
nlohmann::json cmd_optimize(const nlohmann::json& config, const CommandContext& ctx);
nlohmann::json cmd_qpt(const nlohmann::json& config, const CommandContext& ctx);
nlohmann::json cmd_robustness(const nlohmann::json& config, const CommandContext& ctx);
// Manifest carries "violations" (count) so callers can set an exit status.
nlohmann::json cmd_verify(const nlohmann::json& config, const CommandContext& ctx);

nlohmann::json run_command(const nlohmann::json& config, const CommandContext& ctx);

}  // namespace ccphase
