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

#include "ccphase/config_io.hpp"

#include <fstream>
#include <sstream>

namespace ccphase {

namespace {

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

template <typename Fn>
auto parsing(const std::string& what, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

nlohmann::json bounds_json(const Bounds& b) { return {b.lo, b.hi}; }
Bounds bounds_from(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

ComplexMatrix DeviceProfile::target_matrix() const {
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << device.size());
  if (target == "identity") return ComplexMatrix::Identity(d, d);
  if (target == "controlled_phase") return controlled_phase_ideal(device.size());
  throw ArgumentError("unknown target '" + target + "'");
}

DeviceProfile device_profile_from_json(const nlohmann::json& j) {
  return parsing("device", [&] {
    std::vector<TransmonSpec> transmons;
    for (const auto& t : j.at("transmons")) {
      TransmonSpec s;
      s.index = transmons.size();
      s.bare_frequency = t.at("bare_frequency_ghz").get<double>();
      s.anharmonicity = t.at("anharmonicity_ghz").get<double>();
      s.idle_frequency = get_or(t, "idle_frequency_ghz", s.bare_frequency);
      transmons.push_back(s);
    }
    std::vector<ResonatorCoupling> couplings;
    for (const auto& r : j.at("resonators")) {
      ResonatorCoupling c;
      c.left_index = couplings.size();
      c.right_index = c.left_index + 1;
      c.frequency = r.at("frequency_ghz").get<double>();
      c.g_left = r.at("g_left_ghz").get<double>();
      c.g_right = r.at("g_right_ghz").get<double>();
      couplings.push_back(c);
    }
    const int levels = get_or(j, "levels_per_transmon", 4);
    const int emax = get_or(j, "max_total_excitation", 3);
    const double floor = get_or(j, "dispersive_floor_ghz", kDefaultDispersiveFloor);
    DeviceProfile p{DeviceChain(transmons, couplings, levels, emax, floor), {}, "controlled_phase"};

    const auto n = transmons.size();
    std::vector<double> refs;
    for (const auto& t : transmons) refs.push_back(t.idle_frequency);
    p.layout = {n, 50, 1.0, refs};
    if (j.contains("schedule")) {
      const auto& s = j.at("schedule");
      p.layout.segments = get_or<std::size_t>(s, "segments", p.layout.segments);
      p.layout.segment_duration = get_or(s, "segment_duration_ns", p.layout.segment_duration);
      p.layout.search_references = get_or(s, "search_references_ghz", refs);
    }
    if (p.layout.search_references.size() != n)
      throw ArgumentError("schedule needs one search reference per transmon");
    p.target = get_or<std::string>(j, "target", p.target);
    p.target_matrix();
    return p;
  });
}

nlohmann::json device_profile_to_json(const DeviceProfile& p) {
  nlohmann::json transmons = nlohmann::json::array();
  for (const auto& t : p.device.transmons())
    transmons.push_back({{"bare_frequency_ghz", t.bare_frequency},
                         {"anharmonicity_ghz", t.anharmonicity},
                         {"idle_frequency_ghz", t.idle_frequency}});
  nlohmann::json resonators = nlohmann::json::array();
  for (const auto& c : p.device.couplings())
    resonators.push_back(
        {{"frequency_ghz", c.frequency}, {"g_left_ghz", c.g_left}, {"g_right_ghz", c.g_right}});
  return {{"schema_version", kSchemaVersion},
          {"transmons", transmons},
          {"resonators", resonators},
          {"levels_per_transmon", p.device.levels_per_transmon()},
          {"max_total_excitation", p.device.max_total_excitation()},
          {"dispersive_floor_ghz", p.device.dispersive_floor()},
          {"schedule",
           {{"segments", p.layout.segments},
            {"segment_duration_ns", p.layout.segment_duration},
            {"search_references_ghz", p.layout.search_references}}},
          {"target", p.target}};
}

DeviceProfile load_device_profile(const std::filesystem::path& path) {
  try {
    return device_profile_from_json(read_json(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

ConstraintSet constraints_from_json(const nlohmann::json& j) {
  return parsing("constraints", [&] {
    ConstraintSet cs;
    for (const auto& r : j.at("ranges_ghz")) cs.ranges.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
    cs.max_step = get_or(j, "max_step_ghz", cs.max_step);
    cs.boundary_limit = get_or(j, "boundary_limit_ghz", cs.boundary_limit);
    cs.boundary_reference = j.at("boundary_reference_ghz").get<std::vector<double>>();
    cs.min_separation = get_or(j, "min_separation_ghz", cs.min_separation);
    cs.validate(cs.ranges.size());
    return cs;
  });
}

nlohmann::json constraints_to_json(const ConstraintSet& cs) {
  nlohmann::json ranges = nlohmann::json::array();
  for (const auto& r : cs.ranges) ranges.push_back({r.lo, r.hi});
  return {{"schema_version", kSchemaVersion},
          {"ranges_ghz", ranges},
          {"max_step_ghz", cs.max_step},
          {"boundary_limit_ghz", cs.boundary_limit},
          {"boundary_reference_ghz", cs.boundary_reference},
          {"min_separation_ghz", cs.min_separation}};
}

DEConfig de_config_from_json(const nlohmann::json& j) {
  return parsing("optimizer", [&] {
    DEConfig c;
    c.population = get_or(j, "population", c.population);
    c.generations = get_or(j, "generations", c.generations);
    if (j.contains("mutation")) c.mutation = bounds_from(j.at("mutation"));
    if (j.contains("crossover")) c.crossover = bounds_from(j.at("crossover"));
    c.adaptation_probability = get_or(j, "adaptation_probability", c.adaptation_probability);
    c.subspace_fraction = get_or(j, "subspace_fraction", c.subspace_fraction);
    c.target_fidelity = get_or(j, "target_fidelity", c.target_fidelity);
    c.seed = get_or(j, "seed", c.seed);
    c.threads = get_or(j, "threads", c.threads);
    c.max_seed_attempts = get_or(j, "max_seed_attempts", c.max_seed_attempts);
    c.validate();
    return c;
  });
}

nlohmann::json de_config_to_json(const DEConfig& c) {
  // threads is deliberately absent: it never changes results.
  return {{"schema_version", kSchemaVersion},
          {"population", c.population},
          {"generations", c.generations},
          {"mutation", bounds_json(c.mutation)},
          {"crossover", bounds_json(c.crossover)},
          {"adaptation_probability", c.adaptation_probability},
          {"subspace_fraction", c.subspace_fraction},
          {"target_fidelity", c.target_fidelity},
          {"seed", c.seed},
          {"max_seed_attempts", c.max_seed_attempts}};
}

LocalSearchConfig local_search_from_json(const nlohmann::json& j) {
  return parsing("local search", [&] {
    LocalSearchConfig c;
    c.eps_max = get_or(j, "eps_max_ghz", c.eps_max);
    c.eps_min = get_or(j, "eps_min_ghz", c.eps_min);
    c.max_iterations = get_or(j, "max_iterations", c.max_iterations);
    c.target_fidelity = get_or(j, "target_fidelity", c.target_fidelity);
    c.shrink = get_or(j, "shrink", c.shrink);
    c.window = get_or(j, "window", c.window);
    c.validate();
    return c;
  });
}

nlohmann::json local_search_to_json(const LocalSearchConfig& c) {
  return {{"schema_version", kSchemaVersion},
          {"eps_max_ghz", c.eps_max},
          {"eps_min_ghz", c.eps_min},
          {"max_iterations", c.max_iterations},
          {"target_fidelity", c.target_fidelity},
          {"shrink", c.shrink},
          {"window", c.window}};
}

}  // namespace ccphase
