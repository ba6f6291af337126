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

// JSON configuration documents for devices, constraint sets and optimizer
// settings. Every loader accepts the object produced by its *_to_json
// counterpart, so a manifest snapshot can be fed back unchanged.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ccphase/device_model.hpp"
#include "ccphase/pulse_optimizer.hpp"

namespace ccphase {

inline constexpr int kSchemaVersion = 1;

nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

// Device document plus the schedule layout and gate target that belong to it.
struct DeviceProfile {
  DeviceChain device;
  ScheduleLayout layout;
  std::string target = "controlled_phase";  // or "identity"

  ComplexMatrix target_matrix() const;
};

DeviceProfile device_profile_from_json(const nlohmann::json& j);
nlohmann::json device_profile_to_json(const DeviceProfile& profile);
DeviceProfile load_device_profile(const std::filesystem::path& path);

ConstraintSet constraints_from_json(const nlohmann::json& j);
nlohmann::json constraints_to_json(const ConstraintSet& cs);

DEConfig de_config_from_json(const nlohmann::json& j);
nlohmann::json de_config_to_json(const DEConfig& c);

LocalSearchConfig local_search_from_json(const nlohmann::json& j);
nlohmann::json local_search_to_json(const LocalSearchConfig& c);

}  // namespace ccphase
