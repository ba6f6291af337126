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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ccphase/commands.hpp"
#include "ccphase/config_io.hpp"
#include "ccphase/manifest.hpp"
#include "ccphase/pulse_io.hpp"
#include "fixtures.hpp"

using namespace ccphase;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("ccphase_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

CommandContext in(const fs::path& dir) {
  CommandContext ctx;
  ctx.out_dir = dir;
  return ctx;
}

json config_file(const std::string& name) { return read_json(fixtures::source_dir() / "configs" / name); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json toy_optimize(std::size_t generations) {
  auto de = config_file("de_toy.json");
  de["generations"] = generations;
  de["population"] = 8;
  return {{"command", "optimize"},
          {"device", config_file("toy_device.json")},
          {"constraints", config_file("toy_constraints.json")},
          {"optimizer", de},
          {"local_search", nullptr}};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CCPHASE_CLI_PATH) + " --log-level off " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("zero-duration simulation is the identity") {
  const auto dir = scratch("zero");
  json cfg = {{"command", "simulate"},
              {"device", config_file("ccphase_device.json")},
              {"target", "identity"},
              {"idle_duration_ns", 0.0}};
  const auto m = run_command(cfg, in(dir));
  CHECK(m["summary"]["fidelity"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m["summary"]["leakage"].get<double>() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "unitary.json"));
  CHECK(read_json(dir / "report.json")["config_hash"] == config_hash(cfg));
}

TEST_CASE("artifact overrides redirect outputs") {
  const auto dir = scratch("override");
  auto ctx = in(dir);
  ctx.outputs["report"] = dir / "custom.json";
  run_command({{"command", "simulate"}, {"device", config_file("toy_device.json")}, {"idle_duration_ns", 2.0}},
              ctx);
  CHECK(fs::exists(dir / "custom.json"));
  CHECK_FALSE(fs::exists(dir / "report.json"));
}

TEST_CASE("zero generations return the seeded population") {
  const auto dir = scratch("gen0");
  const auto m = run_command(toy_optimize(0), in(dir));
  CHECK(m["summary"]["generations"] == 0);
  CHECK(m["summary"]["evaluations"] == 8);
  CHECK(m["summary"]["constraint_violations"] == 0);
  const auto csv = slurp(dir / "history.csv");
  CHECK(csv.find("\n0,") != std::string::npos);
  CHECK(fs::exists(dir / "pulses.csv"));
  CHECK(fs::exists(dir / "population.json"));
}

TEST_CASE("replaying a manifest reproduces the outputs") {
  const auto a = scratch("replay_a");
  const auto b = scratch("replay_b");
  const auto m = run_command(toy_optimize(4), in(a));
  run_command(read_json(a / "manifest.json")["config"], in(b));
  CHECK(slurp(a / "pulses.csv") == slurp(b / "pulses.csv"));
  CHECK(slurp(a / "history.csv") == slurp(b / "history.csv"));
  CHECK(slurp(a / "population.json") == slurp(b / "population.json"));
  CHECK(m["config_hash"] == read_json(b / "manifest.json")["config_hash"]);
  CHECK(m["tool_version"] == kToolVersion);
}

TEST_CASE("unknown commands and malformed pulses are rejected") {
  const auto dir = scratch("bad");
  CHECK_THROWS_AS(run_command({{"command", "dance"}}, in(dir)), ArgumentError);
  json cfg = {{"command", "verify"},
              {"device", config_file("toy_device.json")},
              {"constraints", config_file("toy_constraints.json")},
              {"pulses", {{"detunings_ghz", "oops"}}}};
  CHECK_THROWS_AS(run_command(cfg, in(dir)), ParseError);
}

TEST_CASE("robustness with a single zero amplitude") {
  const auto dir = scratch("robust0");
  const auto profile = fixtures::toy_profile();
  const auto pulse = read_schedule_csv(fixtures::source_dir() / "data" / "pulses" / "toy_cz.csv",
                                       profile.layout.search_references, profile.layout.segment_duration);
  json cfg = {{"command", "robustness"},
              {"device", config_file("toy_device.json")},
              {"pulses", schedule_to_json(pulse)},
              {"amplitudes_mhz", {0.0}},
              {"samples", 5},
              {"t_ramp_ns", 1.0}};
  const auto m = run_command(cfg, in(dir));
  const auto csv = slurp(dir / "robustness.csv");
  std::size_t rows = 0;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#' && line.rfind("amplitude", 0) != 0) ++rows;
  CHECK(rows == 1);
  CHECK(m["summary"]["first_amplitude_below_0.99_mhz"].is_null());
  CHECK(m["summary"]["smoothed_fidelity"].get<double>() > 0.9);
  CHECK_FALSE(m["summary"].contains("slope_per_mhz"));
}

TEST_CASE("three-level tomography runs and reports its level count") {
  const auto dir = scratch("qpt3");
  const auto profile = fixtures::toy_profile();
  json cfg = {{"command", "qpt"},
              {"device", config_file("toy_device.json")},
              {"pulses", schedule_to_json(read_schedule_csv(
                             fixtures::source_dir() / "data" / "pulses" / "toy_cz.csv",
                             profile.layout.search_references, profile.layout.segment_duration))},
              {"levels", 3},
              {"t1_us", nullptr},
              {"t2_us", nullptr}};
  const auto m = run_command(cfg, in(dir));
  CHECK(m["summary"]["levels"] == 3);
  CHECK(m["summary"]["t1_us"].is_null());
  CHECK(m["summary"]["process_fidelity"].get<double>() > 0.95);
  cfg["levels"] = 5;
  CHECK_THROWS_AS(run_command(cfg, in(dir)), ArgumentError);
}

TEST_CASE("output directory comes from the environment") {
  ::setenv("CCPHASE_OUTPUT_DIR", "/tmp/ccphase_env_dir", 1);
  CHECK(default_output_dir() == fs::path("/tmp/ccphase_env_dir"));
  ::unsetenv("CCPHASE_OUTPUT_DIR");
  CHECK(default_output_dir() == fs::path("."));
}

TEST_CASE("command line exit codes") {
  const auto dir = scratch("cli");
  const auto configs = fixtures::source_dir() / "configs";
  const auto toy = fixtures::source_dir() / "data" / "pulses" / "toy_cz.csv";
  const std::string base = "--out-dir " + dir.string() + " ";
  CHECK(run_cli(base + "verify --device " + (configs / "toy_device.json").string() + " --constraints " +
                (configs / "toy_constraints.json").string() + " --pulses " + toy.string()) == 0);

  // Same pulse against a tighter step limit violates it.
  auto tight = config_file("toy_constraints.json");
  tight["max_step_ghz"] = 0.05;
  write_json(dir / "tight.json", tight);
  CHECK(run_cli(base + "verify --device " + (configs / "toy_device.json").string() + " --constraints " +
                (dir / "tight.json").string() + " --pulses " + toy.string()) == 2);

  std::ofstream(dir / "broken.csv") << "0.1,0.2\nnot-a-number\n";
  CHECK(run_cli(base + "simulate --device " + (configs / "toy_device.json").string() + " --pulses " +
                (dir / "broken.csv").string()) == 1);
  CHECK(run_cli(base + "simulate --device " + (configs / "toy_device.json").string() + " --idle-ns 4") == 0);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(run_cli(base + "replay " + (dir / "manifest.json").string()) == 0);
}

TEST_CASE("missing output directories are created") {
  const auto dir = scratch("fresh") / "nested" / "deeper";
  run_command(toy_optimize(1), in(dir));
  CHECK(fs::exists(dir / "pulses.csv"));
  CHECK(fs::exists(dir / "history.csv"));
  CHECK(fs::exists(dir / "manifest.json"));
}
