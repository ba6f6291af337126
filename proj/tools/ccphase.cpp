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

// ccphase: simulate, optimize, tomograph and stress-test CCPhase pulses.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "ccphase/commands.hpp"
#include "ccphase/config_io.hpp"
#include "ccphase/manifest.hpp"
#include "ccphase/pulse_io.hpp"
#include "ccphase/robustness.hpp"

namespace {

using nlohmann::json;
using namespace ccphase;

json load_pulses(const std::string& path, const json& device) {
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
    return schedule_to_json(schedule_from_json(read_json(path)));
  const auto profile = device_profile_from_json(device);
  return schedule_to_json(read_schedule_csv(path, profile.layout.search_references,
                                            profile.layout.segment_duration));
}

// "lo:hi:step" or a comma-separated list.
std::vector<double> parse_amplitudes(const std::string& text) {
  std::vector<std::string> parts;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, sep);) parts.push_back(part);
  std::vector<double> values;
  for (const auto& p : parts) values.push_back(parse_double(p, "--amplitudes"));
  if (sep == ':') {
    if (values.size() != 3) throw ArgumentError("--amplitudes expects lo:hi:step");
    return NoiseSweepConfig::amplitude_grid(values[0], values[1], values[2]);
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("ccphase"));
  spdlog::set_pattern("[%H:%M:%S] %^%l%$ %v");

  CLI::App app{"Design and verify flux pulses for a CCPhase gate on resonator-coupled transmons"};
  app.require_subcommand(1);
  CommandContext ctx;
  ctx.out_dir = default_output_dir();
  std::string out_dir = ctx.out_dir.string();
  std::string log_level = "info";
  app.add_option("--threads", ctx.threads, "Worker threads (0 = all cores); never changes results");
  app.add_option("--out-dir", out_dir, "Directory for artifacts (default $CCPHASE_OUTPUT_DIR or .)");
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off");

  std::string device, pulses, constraints, target;
  std::optional<double> idle_ns, trotter_step;

  auto* sim = app.add_subcommand("simulate", "Evolve a pulse and score it against the target");
  sim->add_option("--device", device, "Device profile JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--pulses", pulses, "Detuning CSV or schedule JSON (omit to idle)")->check(CLI::ExistingFile);
  sim->add_option("--idle-ns", idle_ns, "Idle duration when no pulses are given");
  sim->add_option("--target", target, "controlled_phase|identity (default from the device profile)");
  sim->add_option("--trotter-step", trotter_step, "Trotter step in ns");
  std::string report_path, unitary_path;
  sim->add_option("--report", report_path, "Report JSON path");
  sim->add_option("--unitary", unitary_path, "Compensated unitary JSON path");

  auto* opt = app.add_subcommand("optimize", "Differential evolution followed by local search");
  std::string de_path, ls_path, resume, checkpoint, initial, pulses_out, history_out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> generations, population;
  bool no_local = false;
  opt->add_option("--device", device)->required()->check(CLI::ExistingFile);
  opt->add_option("--constraints", constraints)->required()->check(CLI::ExistingFile);
  opt->add_option("--de", de_path, "Optimizer settings JSON")->check(CLI::ExistingFile);
  opt->add_option("--ls", ls_path, "Local search settings JSON")->check(CLI::ExistingFile);
  opt->add_flag("--no-local-search", no_local);
  opt->add_option("--seed", seed);
  opt->add_option("--generations", generations);
  opt->add_option("--population", population);
  opt->add_option("--resume", resume, "Population snapshot to continue from")->check(CLI::ExistingFile);
  opt->add_option("--checkpoint", checkpoint, "Write a population snapshot after every generation");
  opt->add_option("--initial", initial, "Pulse placed in the initial population")->check(CLI::ExistingFile);
  opt->add_option("--out", pulses_out, "Pulses CSV path");
  opt->add_option("--history", history_out, "History CSV path");
  opt->add_option("--trotter-step", trotter_step);

  auto* qpt = app.add_subcommand("qpt", "Simulated process tomography");
  std::optional<double> t1, t2;
  int levels = 4;
  std::string chi_out;
  qpt->add_option("--device", device)->required()->check(CLI::ExistingFile);
  qpt->add_option("--pulses", pulses)->required()->check(CLI::ExistingFile);
  qpt->add_option("--t1-us", t1, "Relaxation time (omit for none)");
  qpt->add_option("--t2-us", t2, "Coherence time (omit for none)");
  qpt->add_option("--levels", levels)->check(CLI::IsMember({3, 4}));
  qpt->add_option("--out", chi_out, "chi JSON path");
  qpt->add_option("--report", report_path, "Report JSON path");
  qpt->add_option("--trotter-step", trotter_step);

  auto* rob = app.add_subcommand("robustness", "Noise sweep and erf smoothing");
  std::string amplitudes = "0:10:0.1", rob_out;
  std::size_t samples = 10000;
  double t_ramp = 1.0;
  rob->add_option("--device", device)->required()->check(CLI::ExistingFile);
  rob->add_option("--pulses", pulses)->required()->check(CLI::ExistingFile);
  rob->add_option("--amplitudes", amplitudes, "MHz, lo:hi:step or a comma list");
  rob->add_option("--samples", samples);
  rob->add_option("--seed", seed);
  rob->add_option("--t-ramp", t_ramp, "Smoothing ramp in ns (0 disables)");
  rob->add_option("--out", rob_out, "Robustness CSV path");
  rob->add_option("--trotter-step", trotter_step);

  auto* ver = app.add_subcommand("verify", "Check a pulse against the constraints and score it");
  ver->add_option("--device", device)->required()->check(CLI::ExistingFile);
  ver->add_option("--constraints", constraints)->required()->check(CLI::ExistingFile);
  ver->add_option("--pulses", pulses)->required()->check(CLI::ExistingFile);
  ver->add_option("--trotter-step", trotter_step);

  auto* replay = app.add_subcommand("replay", "Re-run the configuration stored in a manifest");
  std::string manifest_path;
  replay->add_option("manifest", manifest_path)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(log_level));
  ctx.out_dir = out_dir;

  try {
    json config;
    json dev;
    if (!device.empty()) dev = read_json(device);
    auto set_common = [&](const char* command) {
      config["command"] = command;
      config["device"] = device_profile_to_json(device_profile_from_json(dev));
      if (trotter_step) config["trotter_step_ns"] = *trotter_step;
    };

    if (sim->parsed()) {
      set_common("simulate");
      config["pulses"] = pulses.empty() ? json(nullptr) : load_pulses(pulses, dev);
      if (idle_ns) config["idle_duration_ns"] = *idle_ns;
      if (!target.empty()) config["target"] = target;
      if (!report_path.empty()) ctx.outputs["report"] = report_path;
      if (!unitary_path.empty()) ctx.outputs["unitary"] = unitary_path;
    } else if (opt->parsed()) {
      set_common("optimize");
      config["constraints"] = constraints_to_json(constraints_from_json(read_json(constraints)));
      auto de = de_path.empty() ? DEConfig{} : de_config_from_json(read_json(de_path));
      if (seed) de.seed = *seed;
      if (generations) de.generations = *generations;
      if (population) de.population = *population;
      config["optimizer"] = de_config_to_json(de);
      config["local_search"] =
          no_local ? json(nullptr)
                   : local_search_to_json(ls_path.empty() ? LocalSearchConfig{}
                                                          : local_search_from_json(read_json(ls_path)));
      config["resume"] = resume.empty() ? json(nullptr) : read_json(resume);
      config["initial_pulses"] = initial.empty() ? json(nullptr) : load_pulses(initial, dev);
      if (!checkpoint.empty()) config["checkpoint"] = checkpoint;
      if (!pulses_out.empty()) ctx.outputs["pulses"] = pulses_out;
      if (!history_out.empty()) ctx.outputs["history"] = history_out;
    } else if (qpt->parsed()) {
      set_common("qpt");
      config["pulses"] = load_pulses(pulses, dev);
      config["levels"] = levels;
      config["t1_us"] = t1 ? json(*t1) : json(nullptr);
      config["t2_us"] = t2 ? json(*t2) : json(nullptr);
      if (!chi_out.empty()) ctx.outputs["chi"] = chi_out;
      if (!report_path.empty()) ctx.outputs["report"] = report_path;
    } else if (rob->parsed()) {
      set_common("robustness");
      config["pulses"] = load_pulses(pulses, dev);
      config["amplitudes_mhz"] = parse_amplitudes(amplitudes);
      config["samples"] = samples;
      config["seed"] = seed.value_or(1);
      config["t_ramp_ns"] = t_ramp;
      if (!rob_out.empty()) ctx.outputs["robustness"] = rob_out;
    } else if (ver->parsed()) {
      set_common("verify");
      config["constraints"] = constraints_to_json(constraints_from_json(read_json(constraints)));
      config["pulses"] = load_pulses(pulses, dev);
    } else if (replay->parsed()) {
      config = read_json(manifest_path).at("config");
    }

    const auto manifest = run_command(config, ctx);
    std::cout << manifest.at("summary").dump(2) << '\n';
    if (manifest.at("command") == "verify" && manifest.at("summary").at("violations").get<std::size_t>() > 0)
      return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
