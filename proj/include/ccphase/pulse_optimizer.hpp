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

// Pulse search: self-adaptive differential evolution over detuning
// sequences (SUSSADE) followed by a windowed local search with a
// geometrically shrinking step. Every candidate that reaches the fitness
// function satisfies the constraint set; infeasible trials are repaired or
// dropped before evaluation.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccphase/device_model.hpp"
#include "ccphase/gate_fidelity.hpp"
#include "ccphase/propagator.hpp"

namespace ccphase {

struct ScheduleLayout {
  std::size_t qubits = 0;
  std::size_t segments = 0;
  double segment_duration = 1.0;
  std::vector<double> search_references;

  static ScheduleLayout of(const PulseSchedule& schedule);
  std::size_t genes() const noexcept { return qubits * segments; }
};

// Flat qubit-major detuning vector: gene k * segments + i is qubit k, segment i.
class Chromosome {
 public:
  Chromosome() = default;
  Chromosome(std::size_t qubits, std::size_t segments, std::vector<double> genes);
  static Chromosome zeros(std::size_t qubits, std::size_t segments);
  static Chromosome from_schedule(const PulseSchedule& schedule);

  PulseSchedule to_schedule(const ScheduleLayout& layout) const;

  std::size_t qubits() const noexcept { return qubits_; }
  std::size_t segments() const noexcept { return segments_; }
  std::size_t size() const noexcept { return genes_.size(); }
  double at(std::size_t qubit, std::size_t segment) const { return genes_[qubit * segments_ + segment]; }
  double& at(std::size_t qubit, std::size_t segment) { return genes_[qubit * segments_ + segment]; }
  const std::vector<double>& genes() const noexcept { return genes_; }
  std::vector<double>& genes() noexcept { return genes_; }

  std::string to_string() const;
  friend bool operator==(const Chromosome&, const Chromosome&) = default;

 private:
  std::size_t qubits_ = 0;
  std::size_t segments_ = 0;
  std::vector<double> genes_;
};

struct DetuningRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct ConstraintSet {
  std::vector<DetuningRange> ranges;      // per qubit, GHz from the search reference
  double max_step = 0.22;                 // GHz between consecutive segments
  double boundary_limit = 0.5;            // GHz, first/last point vs boundary_reference
  std::vector<double> boundary_reference; // per qubit absolute GHz
  double min_separation = 0.21;           // GHz between neighbouring qubits

  void validate(std::size_t qubits) const;

  // Ranges, step and separation limits of the three-qubit search; the
  // boundary rule is measured from the search references 5.61/6/6.39 GHz.
  static ConstraintSet three_qubit_defaults();
  // Boundary rule measured from the 5/6/7 GHz idle points. Combined with the
  // default ranges this leaves no feasible first/last point for L and R.
  static ConstraintSet idle_referenced();
};

enum class Rule { kRange, kStep, kBoundary, kSeparation };
const char* to_string(Rule rule);

struct Violation {
  std::size_t qubit = 0;  // left qubit of the pair for separation
  std::size_t segment = 0;
  Rule rule = Rule::kRange;
  double value = 0.0;  // offending detuning, step, distance or gap (GHz)
};

std::vector<Violation> validate_constraints(const Chromosome& c, const ConstraintSet& cs,
                                            const ScheduleLayout& layout);
bool satisfies(const Chromosome& c, const ConstraintSet& cs, const ScheduleLayout& layout);

// Left-to-right clamp into the range, step and boundary windows. Returns
// false, leaving c partially modified, when no feasible value exists for some
// point or neighbouring qubits end up closer than the separation limit.
bool repair(Chromosome& c, const ConstraintSet& cs, const ScheduleLayout& layout);

struct Bounds {
  double lo = 0.0;
  double hi = 1.0;
};

struct DEConfig {
  std::size_t population = 200;
  std::size_t generations = 1'000'000;
  Bounds mutation{0.0, 1.0};
  Bounds crossover{0.0, 1.0};
  double adaptation_probability = 0.1;
  double subspace_fraction = 0.5;  // chance a gene joins the mutated subspace
  double target_fidelity = 0.9999;
  std::uint64_t seed = 1;
  std::size_t threads = 0;  // 0 = hardware concurrency
  std::size_t max_seed_attempts = 10000;

  void validate() const;
};

std::vector<Chromosome> seed_population(const DEConfig& config, const ConstraintSet& cs,
                                        const ScheduleLayout& layout);

using FitnessFn = std::function<double(const Chromosome&)>;

struct Member {
  Chromosome genes;
  double fitness = 0.0;
  double mutation = 0.5;
  double crossover = 0.5;
};

struct GenerationRecord {
  std::size_t generation = 0;
  double best_fidelity = 0.0;
  double mean_fidelity = 0.0;
  std::size_t evaluations = 0;  // cumulative
};

// Complete optimizer state after a finished generation.
struct DESnapshot {
  std::uint64_t seed = 0;
  std::size_t generation = 0;
  std::size_t evaluations = 0;
  std::vector<Member> members;
  std::vector<GenerationRecord> history;
};

nlohmann::json snapshot_to_json(const DESnapshot& snapshot);
DESnapshot snapshot_from_json(const nlohmann::json& j);

struct DEObserver {
  // Called serially, in member order, for every chromosome handed to the fitness.
  std::function<void(const Chromosome&, double)> on_evaluate;
  std::function<void(const DESnapshot&)> on_generation;
};

struct DEResult {
  Chromosome best;
  double best_fitness = 0.0;
  bool reached_target = false;
  DESnapshot state;
  const std::vector<GenerationRecord>& history() const noexcept { return state.history; }
};

// Evaluates the (constraint-filtered) population and evolves it until the
// target fidelity or config.generations completed generations.
DEResult run_sussade(std::vector<Chromosome> population, const FitnessFn& fitness,
                     const DEConfig& config, const ConstraintSet& cs, const ScheduleLayout& layout,
                     const DEObserver& observer = {});

// Continues from a snapshot; generation g always draws from the stream keyed
// by (seed, g), so an interrupted and resumed run matches an uninterrupted one.
DEResult resume_sussade(DESnapshot snapshot, const FitnessFn& fitness, const DEConfig& config,
                        const ConstraintSet& cs, const ScheduleLayout& layout,
                        const DEObserver& observer = {});

struct LocalSearchConfig {
  double eps_max = 0.1;     // GHz
  double eps_min = 1e-6;    // GHz
  std::size_t max_iterations = 1000;
  double target_fidelity = 0.9999;
  double shrink = 0.1;
  std::size_t window = 1;   // data points moved together

  void validate() const;
  // eps_max * shrink^m for m = 0.. while >= eps_min.
  std::vector<double> step_schedule() const;
};

struct SweepRecord {
  std::size_t iteration = 0;
  double step = 0.0;
  double fitness = 0.0;
  std::size_t evaluations = 0;  // cumulative
};

struct LocalSearchResult {
  Chromosome best;
  double fitness = 0.0;
  double initial_fitness = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool reached_target = false;
  std::vector<SweepRecord> sweeps;
};

LocalSearchResult local_search(const Chromosome& start, const FitnessFn& fitness,
                               const LocalSearchConfig& config, const ConstraintSet& cs,
                               const ScheduleLayout& layout,
                               const std::function<void(const Chromosome&, double)>& on_evaluate = {});

// Gate fidelity of a chromosome: schedule -> Trotter evolution ->
// projection -> phase fit -> fidelity against `target`. Evolution failures
// score 0 and are logged. Thread-safe.
class GateObjective {
 public:
  GateObjective(DeviceChain device, ComplexMatrix target, ScheduleLayout layout,
                TrotterConfig trotter = {}, PhaseFitOptions fit = {});

  double operator()(const Chromosome& c) const;
  // Throws on evolution failure.
  FidelityReport evaluate(const PulseSchedule& schedule) const;
  FidelityReport evaluate(const Waveform& waveform) const;

  const DeviceChain& device() const noexcept { return device_; }
  const TruncatedBasis& basis() const noexcept { return basis_; }
  const ComplexMatrix& target() const noexcept { return target_; }
  const ScheduleLayout& layout() const noexcept { return layout_; }
  const TrotterConfig& trotter() const noexcept { return trotter_; }
  const PhaseFitOptions& fit_options() const noexcept { return fit_; }

 private:
  DeviceChain device_;
  TruncatedBasis basis_;
  ComputationalProjection projection_;
  ComplexMatrix target_;
  ScheduleLayout layout_;
  TrotterConfig trotter_;
  PhaseFitOptions fit_;
};

// CCPhase fidelity of a three-qubit chromosome on `device`.
double fitness_ccphase(const Chromosome& c, const DeviceChain& device, const ScheduleLayout& layout,
                       const TrotterConfig& trotter = {});

}  // namespace ccphase
