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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccphase/propagator.hpp"

namespace ccphase {

// Shortest decimal that parses back to the same double.
std::string format_double(double value);
double parse_double(const std::string& text, const std::string& context);

// CSV layout: one row per qubit, one column per segment, GHz detunings.
// Lines starting with '#' are comments (used for provenance headers).
void write_schedule_csv(std::ostream& os, const PulseSchedule& schedule,
                        const std::vector<std::string>& comments = {});
PulseSchedule read_schedule_csv(std::istream& is, std::vector<double> search_references,
                                double segment_duration, const std::string& source = "<stream>");
PulseSchedule read_schedule_csv(const std::filesystem::path& path,
                                std::vector<double> search_references, double segment_duration);
void write_schedule_csv(const std::filesystem::path& path, const PulseSchedule& schedule,
                        const std::vector<std::string>& comments = {});

// JSON layout: {schema_version, segment_duration_ns, search_references_ghz, detunings_ghz}.
nlohmann::json schedule_to_json(const PulseSchedule& schedule);
PulseSchedule schedule_from_json(const nlohmann::json& j);

}  // namespace ccphase
