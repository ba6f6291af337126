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

// Devices and schedules shared by the test binaries.

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "ccphase/config_io.hpp"
#include "ccphase/device_model.hpp"
#include "ccphase/pulse_optimizer.hpp"
#include "oracles.hpp"

namespace fixtures {

inline std::filesystem::path source_dir() { return CCPHASE_SOURCE_DIR; }

inline ccphase::DeviceChain three_qubit_device(int levels = 4, int emax = 3) {
  std::vector<ccphase::TransmonSpec> t = {
      {0, 5.0, -0.3, 5.0}, {1, 6.0, -0.3, 6.0}, {2, 7.0, -0.3, 7.0}};
  std::vector<ccphase::ResonatorCoupling> c = {{0, 1, 8.05, 0.2, 0.2}, {1, 2, 8.2, 0.2, 0.2}};
  return ccphase::DeviceChain(t, c, levels, emax);
}

inline std::vector<oracle::Transmon> oracle_chain(const std::vector<double>& freqs) {
  return {{freqs[0], -0.3}, {freqs[1], -0.3}, {freqs[2], -0.3}};
}

inline std::vector<oracle::Resonator> oracle_resonators() { return {{8.05, 0.2, 0.2}, {8.2, 0.2, 0.2}}; }

inline ccphase::ScheduleLayout three_qubit_layout() { return {3, 50, 1.0, {5.61, 6.0, 6.39}}; }

inline ccphase::DeviceProfile toy_profile() {
  return ccphase::load_device_profile(source_dir() / "configs" / "toy_device.json");
}

inline ccphase::ConstraintSet toy_constraints() {
  return ccphase::constraints_from_json(
      ccphase::read_json(source_dir() / "configs" / "toy_constraints.json"));
}

// Constraint-satisfying random schedules for property tests.
inline std::vector<ccphase::PulseSchedule> random_schedules(std::size_t count, std::uint64_t seed,
                                                            std::size_t segments = 50) {
  ccphase::DEConfig cfg;
  cfg.population = std::max<std::size_t>(count, 4);
  cfg.seed = seed;
  auto layout = three_qubit_layout();
  layout.segments = segments;
  const auto members = ccphase::seed_population(cfg, ccphase::ConstraintSet::three_qubit_defaults(), layout);
  std::vector<ccphase::PulseSchedule> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(members[i].to_schedule(layout));
  return out;
}

}  // namespace fixtures
