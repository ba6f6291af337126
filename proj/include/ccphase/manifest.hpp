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

// Run manifests. The hash covers only the resolved configuration, never
// timings, so identical configurations stamp identical hashes on outputs.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

namespace ccphase {

inline constexpr const char* kToolVersion = "0.1.0";

std::uint64_t fnv1a(std::string_view bytes);
std::string config_hash(const nlohmann::json& config);

struct RunManifest {
  std::string command;
  nlohmann::json config;  // resolved snapshot
  std::map<std::string, double> timings_s;
  std::map<std::string, double> fidelities;

  std::string hash() const { return config_hash(config); }
  nlohmann::json to_json() const;
};

}  // namespace ccphase
