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

#include "ccphase/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>

#include <spdlog/spdlog.h>

#include "ccphase/config_io.hpp"
#include "ccphase/manifest.hpp"
#include "ccphase/open_system.hpp"
#include "ccphase/pulse_io.hpp"
#include "ccphase/robustness.hpp"

namespace ccphase {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

json matrix_to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back({m(r, c).real(), m(r, c).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"order", "row-major"}, {"data", data}};
}

double time_us(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::numeric_limits<double>::infinity();
  return j.at(key).get<double>();
}

json time_us_json(double t) { return std::isinf(t) ? json(nullptr) : json(t); }

TrotterConfig trotter_of(const json& config) { return {config.value("trotter_step_ns", 0.1)}; }

void ensure_dir(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

std::ofstream open_out(const fs::path& p) {
  ensure_dir(p);
  std::ofstream out(p);
  if (!out) throw ParseError("cannot write " + p.string());
  return out;
}

void write_doc(const fs::path& p, json j, const std::string& hash) {
  j["config_hash"] = hash;
  ensure_dir(p);
  write_json(p, j);
}

json finish(RunManifest& m, const CommandContext& ctx, json summary) {
  json j = m.to_json();
  j["summary"] = std::move(summary);
  write_json(ctx.artifact("manifest", "manifest.json"), j);
  return j;
}

PulseSchedule schedule_of(const json& config) {
  try {
    return schedule_from_json(config.at("pulses"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("pulses: ") + e.what());
  }
}

}  // namespace

fs::path CommandContext::artifact(const std::string& name, const std::string& fallback) const {
  const auto it = outputs.find(name);
  if (it != outputs.end()) return it->second;
  return out_dir / fallback;
}

fs::path default_output_dir() {
  if (const char* env = std::getenv("CCPHASE_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

json cmd_simulate(const json& config, const CommandContext& ctx) {
  Stopwatch clock;
  RunManifest manifest{"simulate", config, {}, {}};
  const auto hash = manifest.hash();
  auto profile = device_profile_from_json(config.at("device"));
  if (config.contains("target")) profile.target = config.at("target").get<std::string>();
  const auto target = profile.target_matrix();
  const auto trotter = trotter_of(config);

  std::unique_ptr<Waveform> waveform;
  if (config.contains("pulses") && !config.at("pulses").is_null()) {
    waveform = std::make_unique<PiecewiseConstantWaveform>(schedule_of(config));
  } else {
    const double duration = config.value("idle_duration_ns", profile.layout.segment_duration *
                                                                 static_cast<double>(profile.layout.segments));
    waveform = std::make_unique<ConstantWaveform>(profile.device.idle_frequencies(), duration);
  }

  const auto basis = device_basis(profile.device);
  const auto u = evolve(profile.device, basis, *waveform, trotter);
  const ComplexMatrix u8 = ComputationalProjection(basis).apply(u.matrix());
  const auto report = fidelity_report(u8, target);
  const double leakage = 1.0 - (u8.adjoint() * u8).trace().real() / static_cast<double>(u8.rows());
  manifest.timings_s["simulate"] = clock.lap();
  manifest.fidelities["gate"] = report.fidelity;

  json rep = report_to_json(report);
  rep["leakage"] = leakage;
  rep["duration_ns"] = waveform->duration();
  rep["target"] = profile.target;
  write_doc(ctx.artifact("report", "report.json"), rep, hash);
  json uni = matrix_to_json(report.compensated);
  uni["schema_version"] = kSchemaVersion;
  write_doc(ctx.artifact("unitary", "unitary.json"), uni, hash);
  spdlog::info("fidelity {:.6f} (leakage {:.2e}) over {} ns", report.fidelity, leakage,
               waveform->duration());
  return finish(manifest, ctx, rep);
}

json cmd_optimize(const json& config, const CommandContext& ctx) {
  Stopwatch clock;
  RunManifest manifest{"optimize", config, {}, {}};
  const auto hash = manifest.hash();
  const auto profile = device_profile_from_json(config.at("device"));
  const auto cs = constraints_from_json(config.at("constraints"));
  auto de = de_config_from_json(config.at("optimizer"));
  de.threads = ctx.threads;
  const auto layout = profile.layout;
  const GateObjective objective(profile.device, profile.target_matrix(), layout, trotter_of(config));
  const FitnessFn fitness = [&](const Chromosome& c) { return objective(c); };

  std::size_t violating = 0;
  DEObserver observer;
  observer.on_evaluate = [&](const Chromosome& c, double) {
    if (!satisfies(c, cs, layout)) ++violating;
  };
  const auto checkpoint = config.value("checkpoint", std::string());
  observer.on_generation = [&](const DESnapshot& s) {
    const auto& h = s.history.back();
    if (ctx.log_every && s.generation % ctx.log_every == 0)
      spdlog::info("generation {}: best {:.6f} mean {:.6f} ({} evaluations)", s.generation,
                   h.best_fidelity, h.mean_fidelity, h.evaluations);
    if (!checkpoint.empty()) write_json(checkpoint, snapshot_to_json(s));
  };

  DEResult result;
  if (config.contains("resume") && !config.at("resume").is_null()) {
    auto snapshot = snapshot_from_json(config.at("resume"));
    spdlog::info("resuming from generation {}", snapshot.generation);
    result = resume_sussade(std::move(snapshot), fitness, de, cs, layout, observer);
  } else {
    auto population = seed_population(de, cs, layout);
    if (config.contains("initial_pulses") && !config.at("initial_pulses").is_null())
      population.front() = Chromosome::from_schedule(schedule_from_json(config.at("initial_pulses")));
    result = run_sussade(std::move(population), fitness, de, cs, layout, observer);
  }
  manifest.timings_s["differential_evolution"] = clock.lap();
  manifest.fidelities["differential_evolution"] = result.best_fitness;

  Chromosome best = result.best;
  double best_fitness = result.best_fitness;
  std::optional<LocalSearchResult> ls;
  if (config.contains("local_search") && !config.at("local_search").is_null()) {
    const auto lsc = local_search_from_json(config.at("local_search"));
    // Progress lines and a provisional pulses file, so an interrupted search
    // still leaves its best pulse behind.
    Chromosome ls_best = best;
    double ls_fitness = best_fitness;
    std::size_t ls_evaluations = 0;
    ls = local_search(best, fitness, lsc, cs, layout, [&](const Chromosome& c, double f) {
      observer.on_evaluate(c, f);
      if (f > ls_fitness) {
        ls_fitness = f;
        ls_best = c;
      }
      if (ctx.log_every && ++ls_evaluations % (ctx.log_every * 100) == 0) {
        spdlog::info("local search: {} evaluations, best {:.6f}", ls_evaluations, ls_fitness);
        write_schedule_csv(ctx.artifact("pulses", "pulses.csv"), ls_best.to_schedule(layout),
                           {"config_hash " + hash, "provisional local search best",
                            "fidelity " + format_double(ls_fitness)});
      }
    });
    best = ls->best;
    best_fitness = ls->fitness;
    manifest.timings_s["local_search"] = clock.lap();
    manifest.fidelities["local_search"] = best_fitness;
  }
  if (violating > 0) spdlog::error("{} evaluated chromosomes violated constraints", violating);

  const auto schedule = best.to_schedule(layout);
  write_schedule_csv(ctx.artifact("pulses", "pulses.csv"), schedule,
                     {"config_hash " + hash, "seed " + std::to_string(de.seed),
                      "fidelity " + format_double(best_fitness)});
  {
    auto out = open_out(ctx.artifact("history", "history.csv"));
    out << "# config_hash " << hash << "\n# seed " << de.seed << '\n';
    out << "generation,best_fidelity,mean_fidelity,evaluations\n";
    for (const auto& h : result.history())
      out << h.generation << ',' << format_double(h.best_fidelity) << ','
          << format_double(h.mean_fidelity) << ',' << h.evaluations << '\n';
  }
  if (ls) {
    auto out = open_out(ctx.artifact("local_search", "local_search.csv"));
    out << "# config_hash " << hash << "\n# seed " << de.seed << '\n';
    out << "iteration,step_ghz,fidelity,evaluations\n";
    for (const auto& s : ls->sweeps)
      out << s.iteration << ',' << format_double(s.step) << ',' << format_double(s.fitness) << ','
          << s.evaluations << '\n';
  }
  write_doc(ctx.artifact("population", "population.json"), snapshot_to_json(result.state), hash);

  json summary = {{"fidelity", best_fitness},
                  {"differential_evolution_fidelity", result.best_fitness},
                  {"generations", result.state.generation},
                  {"evaluations", result.state.evaluations + (ls ? ls->evaluations : 0)},
                  {"constraint_violations", violating},
                  {"seed", de.seed}};
  spdlog::info("best fidelity {:.6f}", best_fitness);
  return finish(manifest, ctx, summary);
}

json cmd_qpt(const json& config, const CommandContext& ctx) {
  Stopwatch clock;
  RunManifest manifest{"qpt", config, {}, {}};
  const auto hash = manifest.hash();
  const auto profile = device_profile_from_json(config.at("device"));
  const int levels = config.value("levels", profile.device.levels_per_transmon());
  if (levels != 3 && levels != 4) throw ArgumentError("levels must be 3 or 4");
  const auto device = profile.device.with_levels(levels, profile.device.max_total_excitation());
  const double t1 = time_us(config, "t1_us");
  const double t2 = time_us(config, "t2_us");

  QPTOptions options;
  options.trotter = trotter_of(config);
  options.threads = ctx.threads;
  if (!std::isinf(t1) || !std::isinf(t2))
    options.lindblad = LindbladSpec::uniform(device.size(), t1, t2);
  const PiecewiseConstantWaveform waveform(schedule_of(config));
  const auto result = run_qpt(device, waveform, profile.target_matrix(), options);
  manifest.timings_s["qpt"] = clock.lap();
  manifest.fidelities["process"] = result.report.process_fidelity;
  manifest.fidelities["closed_gate"] = result.closed.fidelity;

  json chi = matrix_to_json(result.chi.matrix());
  chi["schema_version"] = kSchemaVersion;
  chi["basis"] = "pauli, first qubit most significant, I X Y Z";
  write_doc(ctx.artifact("chi", "chi.json"), chi, hash);
  json rep = {{"schema_version", kSchemaVersion},
              {"process_fidelity", result.report.process_fidelity},
              {"average_gate_fidelity", result.report.average_gate_fidelity},
              {"average_purity", result.report.average_purity},
              {"levels", levels},
              {"t1_us", time_us_json(t1)},
              {"t2_us", time_us_json(t2)},
              {"closed_system_fidelity", result.closed.fidelity},
              {"mean_leakage", result.mean_leakage},
              {"note", "qubit block taken without renormalization; lost trace is absorbed by the "
                       "trace-one projection of chi"}};
  write_doc(ctx.artifact("report", "report.json"), rep, hash);
  spdlog::info("F_p {:.6f}  F_g {:.6f}  purity {:.6f}", result.report.process_fidelity,
               result.report.average_gate_fidelity, result.report.average_purity);
  return finish(manifest, ctx, rep);
}

json cmd_robustness(const json& config, const CommandContext& ctx) {
  Stopwatch clock;
  RunManifest manifest{"robustness", config, {}, {}};
  const auto hash = manifest.hash();
  const auto profile = device_profile_from_json(config.at("device"));
  const auto schedule = schedule_of(config);
  const GateObjective objective(profile.device, profile.target_matrix(), ScheduleLayout::of(schedule),
                                trotter_of(config));

  NoiseSweepConfig noise;
  noise.amplitudes_mhz = config.at("amplitudes_mhz").get<std::vector<double>>();
  noise.samples = config.value("samples", noise.samples);
  noise.seed = config.value("seed", noise.seed);
  noise.threads = ctx.threads;
  const auto report = noise_sweep(schedule, objective, noise);
  manifest.timings_s["noise_sweep"] = clock.lap();

  json summary = {{"schema_version", kSchemaVersion}, {"baseline_fidelity", report.baseline}};
  const double t_ramp = config.value("t_ramp_ns", 1.0);
  if (t_ramp > 0.0 && t_ramp <= schedule.segment_duration()) {
    const auto d = distortion_report(schedule, objective, {t_ramp, 0.0});
    summary["smoothed_fidelity"] = d.smoothed;
    summary["smoothing_delta"] = d.delta;
    summary["t_ramp_ns"] = t_ramp;
    manifest.fidelities["smoothed"] = d.smoothed;
  }
  json crossing = nullptr;
  for (const auto& p : report.curve)
    if (p.mean_fidelity < 0.99) {
      crossing = p.amplitude_mhz;
      break;
    }
  summary["first_amplitude_below_0.99_mhz"] = crossing;
  if (report.curve.size() >= 3) {
    const auto trend = fit_trend(report);
    summary["slope_per_mhz"] = trend.slope;
    summary["slope_std_error"] = trend.std_error;
  }
  manifest.fidelities["baseline"] = report.baseline;

  {
    auto out = open_out(ctx.artifact("robustness", "robustness.csv"));
    out << "# config_hash " << hash << "\n# seed " << noise.seed << '\n';
    out << "amplitude_mhz,mean_fidelity,std_error,samples\n";
    for (const auto& p : report.curve)
      out << format_double(p.amplitude_mhz) << ',' << format_double(p.mean_fidelity) << ','
          << format_double(p.std_error) << ',' << p.samples << '\n';
  }
  std::size_t singular = 0;
  for (const auto& p : report.curve) singular += p.singular;
  summary["singular_samples"] = singular;
  write_doc(ctx.artifact("summary", "robustness_summary.json"), summary, hash);
  return finish(manifest, ctx, summary);
}

json cmd_verify(const json& config, const CommandContext& ctx) {
  RunManifest manifest{"verify", config, {}, {}};
  const auto profile = device_profile_from_json(config.at("device"));
  const auto cs = constraints_from_json(config.at("constraints"));
  const auto schedule = schedule_of(config);
  const auto layout = ScheduleLayout::of(schedule);
  const auto violations = validate_constraints(Chromosome::from_schedule(schedule), cs, layout);
  json list = json::array();
  for (const auto& v : violations) {
    list.push_back({{"qubit", v.qubit}, {"segment", v.segment}, {"rule", to_string(v.rule)}, {"value", v.value}});
    spdlog::warn("qubit {} segment {}: {} rule violated ({:.6f} GHz)", v.qubit, v.segment,
                 to_string(v.rule), v.value);
  }
  const GateObjective objective(profile.device, profile.target_matrix(), layout, trotter_of(config));
  const auto report = objective.evaluate(schedule);
  manifest.fidelities["gate"] = report.fidelity;
  json summary = report_to_json(report);
  summary["violations"] = violations.size();
  summary["violation_list"] = list;
  spdlog::info("{} violations, fidelity {:.6f}", violations.size(), report.fidelity);
  return finish(manifest, ctx, summary);
}

json run_command(const json& config, const CommandContext& ctx) {
  const auto command = config.at("command").get<std::string>();
  if (command == "simulate") return cmd_simulate(config, ctx);
  if (command == "optimize") return cmd_optimize(config, ctx);
  if (command == "qpt") return cmd_qpt(config, ctx);
  if (command == "robustness") return cmd_robustness(config, ctx);
  if (command == "verify") return cmd_verify(config, ctx);
  throw ArgumentError("unknown command '" + command + "'");
}

}  // namespace ccphase
