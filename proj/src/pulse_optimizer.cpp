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

#include "ccphase/pulse_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <spdlog/spdlog.h>

#include "ccphase/parallel.hpp"
#include "ccphase/pulse_io.hpp"

namespace ccphase {

namespace {

constexpr double kSlack = 1e-12;  // GHz, comparison slack for limits hit exactly

struct Interval {
  double lo;
  double hi;
  bool empty() const { return lo > hi; }
};

// Feasible detuning window for one point given the previous point of the same qubit.
Interval allowed(const ConstraintSet& cs, const ScheduleLayout& layout, std::size_t qubit,
                 std::size_t segment, const double* previous) {
  Interval w{cs.ranges[qubit].lo, cs.ranges[qubit].hi};
  if (previous) {
    w.lo = std::max(w.lo, *previous - cs.max_step);
    w.hi = std::min(w.hi, *previous + cs.max_step);
  }
  if (segment == 0 || segment + 1 == layout.segments) {
    const double center = cs.boundary_reference[qubit] - layout.search_references[qubit];
    w.lo = std::max(w.lo, center - cs.boundary_limit);
    w.hi = std::min(w.hi, center + cs.boundary_limit);
  }
  return w;
}

bool separated(const Chromosome& c, const ConstraintSet& cs, const ScheduleLayout& layout,
               std::size_t segment) {
  for (std::size_t k = 0; k + 1 < layout.qubits; ++k) {
    const double a = layout.search_references[k] + c.at(k, segment);
    const double b = layout.search_references[k + 1] + c.at(k + 1, segment);
    if (std::abs(a - b) < cs.min_separation - kSlack) return false;
  }
  return true;
}

void check_layout(const Chromosome& c, const ConstraintSet& cs, const ScheduleLayout& layout) {
  if (c.qubits() != layout.qubits || c.segments() != layout.segments ||
      c.size() != layout.genes())
    throw ArgumentError("chromosome has " + std::to_string(c.size()) + " genes, layout expects " +
                        std::to_string(layout.qubits) + " x " + std::to_string(layout.segments));
  if (layout.search_references.size() != layout.qubits)
    throw ArgumentError("layout needs one search reference per qubit");
  cs.validate(layout.qubits);
}

std::mt19937_64 generation_stream(std::uint64_t seed, std::size_t generation) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(generation),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(generation) >> 32),
                    0x5eedU};
  return std::mt19937_64(seq);
}

double draw(std::mt19937_64& rng, double lo, double hi) {
  if (lo == hi) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

ScheduleLayout ScheduleLayout::of(const PulseSchedule& schedule) {
  return {schedule.qubits(), schedule.segments(), schedule.segment_duration(),
          schedule.search_references()};
}

Chromosome::Chromosome(std::size_t qubits, std::size_t segments, std::vector<double> genes)
    : qubits_(qubits), segments_(segments), genes_(std::move(genes)) {
  if (genes_.size() != qubits * segments)
    throw ArgumentError("chromosome needs " + std::to_string(qubits * segments) + " genes, got " +
                        std::to_string(genes_.size()));
  for (double g : genes_)
    if (!std::isfinite(g)) throw ArgumentError("chromosome genes must be finite");
}

Chromosome Chromosome::zeros(std::size_t qubits, std::size_t segments) {
  return Chromosome(qubits, segments, std::vector<double>(qubits * segments, 0.0));
}

Chromosome Chromosome::from_schedule(const PulseSchedule& schedule) {
  std::vector<double> genes;
  genes.reserve(schedule.qubits() * schedule.segments());
  for (std::size_t k = 0; k < schedule.qubits(); ++k)
    for (std::size_t i = 0; i < schedule.segments(); ++i) genes.push_back(schedule.detuning(k, i));
  return Chromosome(schedule.qubits(), schedule.segments(), std::move(genes));
}

PulseSchedule Chromosome::to_schedule(const ScheduleLayout& layout) const {
  if (layout.qubits != qubits_ || layout.segments != segments_)
    throw ArgumentError("chromosome shape does not match the layout");
  Eigen::MatrixXd d(static_cast<Eigen::Index>(qubits_), static_cast<Eigen::Index>(segments_));
  for (std::size_t k = 0; k < qubits_; ++k)
    for (std::size_t i = 0; i < segments_; ++i)
      d(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = at(k, i);
  return PulseSchedule(std::move(d), layout.search_references, layout.segment_duration);
}

std::string Chromosome::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t g = 0; g < genes_.size(); ++g) os << (g ? "," : "") << format_double(genes_[g]);
  os << ']';
  return os.str();
}

void ConstraintSet::validate(std::size_t qubits) const {
  if (ranges.size() != qubits || boundary_reference.size() != qubits)
    throw ArgumentError("constraint set needs one range and one boundary reference per qubit");
  for (const auto& r : ranges)
    if (!(r.lo <= r.hi)) throw ArgumentError("detuning range is not well ordered");
  if (!(max_step > 0.0) || !(boundary_limit > 0.0) || !(min_separation > 0.0))
    throw ArgumentError("constraint limits must be positive");
}

ConstraintSet ConstraintSet::three_qubit_defaults() {
  ConstraintSet cs;
  cs.ranges = {{0.0, 0.5}, {-0.5, 0.5}, {-0.5, 0.0}};
  cs.boundary_reference = {5.61, 6.0, 6.39};
  return cs;
}

ConstraintSet ConstraintSet::idle_referenced() {
  auto cs = three_qubit_defaults();
  cs.boundary_reference = {5.0, 6.0, 7.0};
  return cs;
}

const char* to_string(Rule rule) {
  switch (rule) {
    case Rule::kRange: return "range";
    case Rule::kStep: return "step";
    case Rule::kBoundary: return "boundary";
    case Rule::kSeparation: return "separation";
  }
  return "unknown";
}

std::vector<Violation> validate_constraints(const Chromosome& c, const ConstraintSet& cs,
                                            const ScheduleLayout& layout) {
  check_layout(c, cs, layout);
  std::vector<Violation> out;
  const auto n = layout.qubits;
  const auto s = layout.segments;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < s; ++i) {
      const double v = c.at(k, i);
      if (v < cs.ranges[k].lo - kSlack || v > cs.ranges[k].hi + kSlack)
        out.push_back({k, i, Rule::kRange, v});
      if (i > 0) {
        const double step = std::abs(v - c.at(k, i - 1));
        if (step > cs.max_step + kSlack) out.push_back({k, i, Rule::kStep, step});
      }
      if (i == 0 || i + 1 == s) {
        const double dist = std::abs(layout.search_references[k] + v - cs.boundary_reference[k]);
        if (dist > cs.boundary_limit + kSlack) out.push_back({k, i, Rule::kBoundary, dist});
      }
    }
  }
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double gap = std::abs((layout.search_references[k] + c.at(k, i)) -
                                  (layout.search_references[k + 1] + c.at(k + 1, i)));
      if (gap < cs.min_separation - kSlack) out.push_back({k, i, Rule::kSeparation, gap});
    }
  }
  return out;
}

bool satisfies(const Chromosome& c, const ConstraintSet& cs, const ScheduleLayout& layout) {
  return validate_constraints(c, cs, layout).empty();
}

bool repair(Chromosome& c, const ConstraintSet& cs, const ScheduleLayout& layout) {
  check_layout(c, cs, layout);
  for (std::size_t i = 0; i < layout.segments; ++i) {
    for (std::size_t k = 0; k < layout.qubits; ++k) {
      const double prev = i > 0 ? c.at(k, i - 1) : 0.0;
      const auto w = allowed(cs, layout, k, i, i > 0 ? &prev : nullptr);
      if (w.empty()) return false;
      c.at(k, i) = std::clamp(c.at(k, i), w.lo, w.hi);
    }
    if (!separated(c, cs, layout, i)) return false;
  }
  return true;
}

void DEConfig::validate() const {
  if (population < 4) throw ArgumentError("population must hold at least 4 members");
  if (!(mutation.lo <= mutation.hi) || !(crossover.lo <= crossover.hi))
    throw ArgumentError("self-adaptation bounds are not well ordered");
  if (crossover.lo < 0.0 || crossover.hi > 1.0) throw ArgumentError("crossover bounds must lie in [0, 1]");
  if (adaptation_probability < 0.0 || adaptation_probability > 1.0)
    throw ArgumentError("adaptation probability must lie in [0, 1]");
  if (!(subspace_fraction > 0.0) || subspace_fraction > 1.0)
    throw ArgumentError("subspace fraction must lie in (0, 1]");
}

std::vector<Chromosome> seed_population(const DEConfig& config, const ConstraintSet& cs,
                                        const ScheduleLayout& layout) {
  config.validate();
  cs.validate(layout.qubits);
  std::mt19937_64 rng = generation_stream(config.seed, std::numeric_limits<std::size_t>::max());
  std::vector<Chromosome> population;
  population.reserve(config.population);

  for (std::size_t m = 0; m < config.population; ++m) {
    Chromosome c = Chromosome::zeros(layout.qubits, layout.segments);
    std::size_t attempts = 0;
    std::size_t i = 0;
    while (i < layout.segments) {
      if (attempts++ >= config.max_seed_attempts)
        throw InfeasibleError("could not seed chromosome " + std::to_string(m) + " after " +
                              std::to_string(config.max_seed_attempts) + " attempts");
      bool ok = true;
      for (std::size_t k = 0; k < layout.qubits && ok; ++k) {
        const double prev = i > 0 ? c.at(k, i - 1) : 0.0;
        const auto w = allowed(cs, layout, k, i, i > 0 ? &prev : nullptr);
        if (w.empty()) {
          ok = false;
          break;
        }
        c.at(k, i) = draw(rng, w.lo, w.hi);
      }
      if (!ok) {
        i = 0;  // dead end: restart the walk
        continue;
      }
      if (separated(c, cs, layout, i)) ++i;
    }
    population.push_back(std::move(c));
  }
  return population;
}

nlohmann::json snapshot_to_json(const DESnapshot& s) {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& m : s.members) {
    members.push_back({{"genes", m.genes.genes()},
                       {"qubits", m.genes.qubits()},
                       {"segments", m.genes.segments()},
                       {"fitness", m.fitness},
                       {"mutation", m.mutation},
                       {"crossover", m.crossover}});
  }
  nlohmann::json history = nlohmann::json::array();
  for (const auto& h : s.history)
    history.push_back({h.generation, h.best_fidelity, h.mean_fidelity, h.evaluations});
  return {{"schema_version", 1},       {"seed", s.seed},       {"generation", s.generation},
          {"evaluations", s.evaluations}, {"members", members}, {"history", history}};
}

DESnapshot snapshot_from_json(const nlohmann::json& j) {
  try {
    DESnapshot s;
    s.seed = j.at("seed").get<std::uint64_t>();
    s.generation = j.at("generation").get<std::size_t>();
    s.evaluations = j.at("evaluations").get<std::size_t>();
    for (const auto& m : j.at("members")) {
      Member member;
      member.genes = Chromosome(m.at("qubits").get<std::size_t>(), m.at("segments").get<std::size_t>(),
                                m.at("genes").get<std::vector<double>>());
      member.fitness = m.at("fitness").get<double>();
      member.mutation = m.at("mutation").get<double>();
      member.crossover = m.at("crossover").get<double>();
      s.members.push_back(std::move(member));
    }
    for (const auto& h : j.at("history"))
      s.history.push_back({h.at(0).get<std::size_t>(), h.at(1).get<double>(), h.at(2).get<double>(),
                           h.at(3).get<std::size_t>()});
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("population snapshot: ") + e.what());
  }
}

namespace {

double checked(double f, const Chromosome& c) {
  if (std::isnan(f)) throw EvaluationError("fitness returned NaN", c.to_string());
  return f;
}

GenerationRecord summarize(const DESnapshot& s) {
  GenerationRecord r{s.generation, -std::numeric_limits<double>::infinity(), 0.0, s.evaluations};
  for (const auto& m : s.members) {
    r.best_fidelity = std::max(r.best_fidelity, m.fitness);
    r.mean_fidelity += m.fitness;
  }
  r.mean_fidelity /= static_cast<double>(s.members.size());
  return r;
}

DEResult finish(DESnapshot state, double target) {
  DEResult result;
  std::size_t best = 0;
  for (std::size_t i = 1; i < state.members.size(); ++i)
    if (state.members[i].fitness > state.members[best].fitness) best = i;
  result.best = state.members[best].genes;
  result.best_fitness = state.members[best].fitness;
  result.reached_target = result.best_fitness >= target;
  result.state = std::move(state);
  return result;
}

}  // namespace

DEResult resume_sussade(DESnapshot state, const FitnessFn& fitness, const DEConfig& config,
                        const ConstraintSet& cs, const ScheduleLayout& layout,
                        const DEObserver& observer) {
  config.validate();
  const auto np = state.members.size();
  if (np < 4) throw ArgumentError("population must hold at least 4 members");
  const auto genes = layout.genes();

  auto best_of = [&] {
    double b = -std::numeric_limits<double>::infinity();
    for (const auto& m : state.members) b = std::max(b, m.fitness);
    return b;
  };

  std::vector<Chromosome> trials(np);
  std::vector<char> evaluate(np);
  std::vector<double> scores(np);

  while (state.generation < config.generations && best_of() < config.target_fidelity) {
    const std::size_t generation = state.generation + 1;
    auto rng = generation_stream(state.seed, generation);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, np - 1);
    std::uniform_int_distribution<std::size_t> pick_gene(0, genes - 1);

    for (std::size_t i = 0; i < np; ++i) {
      auto& member = state.members[i];
      if (unit(rng) < config.adaptation_probability)
        member.mutation = draw(rng, config.mutation.lo, config.mutation.hi);
      if (unit(rng) < config.adaptation_probability)
        member.crossover = draw(rng, config.crossover.lo, config.crossover.hi);

      std::size_t a, b, c;
      do a = pick(rng); while (a == i);
      do b = pick(rng); while (b == i || b == a);
      do c = pick(rng); while (c == i || c == a || c == b);

      const auto& x = member.genes.genes();
      const auto& xa = state.members[a].genes.genes();
      const auto& xb = state.members[b].genes.genes();
      const auto& xc = state.members[c].genes.genes();
      const std::size_t forced = pick_gene(rng);
      std::vector<double> t(x);
      for (std::size_t g = 0; g < genes; ++g) {
        const bool in_subspace = unit(rng) < config.subspace_fraction || g == forced;
        const bool crossed = unit(rng) < member.crossover || g == forced;
        if (in_subspace && crossed) t[g] = xa[g] + member.mutation * (xb[g] - xc[g]);
      }
      Chromosome trial(layout.qubits, layout.segments, std::move(t));
      const bool feasible = repair(trial, cs, layout);
      evaluate[i] = feasible && trial != member.genes;
      trials[i] = std::move(trial);
    }

    parallel_for(np, config.threads, [&](std::size_t i) {
      if (evaluate[i]) scores[i] = fitness(trials[i]);
    });

    for (std::size_t i = 0; i < np; ++i) {
      if (!evaluate[i]) continue;
      const double f = checked(scores[i], trials[i]);
      ++state.evaluations;
      if (observer.on_evaluate) observer.on_evaluate(trials[i], f);
      if (f > state.members[i].fitness) {
        state.members[i].genes = std::move(trials[i]);
        state.members[i].fitness = f;
      }
    }
    state.generation = generation;
    state.history.push_back(summarize(state));
    if (observer.on_generation) observer.on_generation(state);
  }
  return finish(std::move(state), config.target_fidelity);
}

DEResult run_sussade(std::vector<Chromosome> population, const FitnessFn& fitness,
                     const DEConfig& config, const ConstraintSet& cs, const ScheduleLayout& layout,
                     const DEObserver& observer) {
  config.validate();
  std::vector<Chromosome> feasible;
  for (auto& c : population) {
    if (satisfies(c, cs, layout)) {
      feasible.push_back(std::move(c));
    } else {
      spdlog::warn("dropping constraint-violating chromosome from the initial population");
    }
  }
  if (feasible.size() < 4)
    throw ArgumentError("fewer than 4 constraint-satisfying chromosomes in the initial population");

  DESnapshot state;
  state.seed = config.seed;
  state.members.resize(feasible.size());
  auto rng = generation_stream(config.seed, 0);
  std::vector<double> scores(feasible.size());
  parallel_for(feasible.size(), config.threads,
               [&](std::size_t i) { scores[i] = fitness(feasible[i]); });
  for (std::size_t i = 0; i < feasible.size(); ++i) {
    auto& m = state.members[i];
    m.fitness = checked(scores[i], feasible[i]);
    m.mutation = draw(rng, config.mutation.lo, config.mutation.hi);
    m.crossover = draw(rng, config.crossover.lo, config.crossover.hi);
    ++state.evaluations;
    if (observer.on_evaluate) observer.on_evaluate(feasible[i], m.fitness);
    m.genes = std::move(feasible[i]);
  }
  state.history.push_back(summarize(state));
  if (observer.on_generation) observer.on_generation(state);
  return resume_sussade(std::move(state), fitness, config, cs, layout, observer);
}

void LocalSearchConfig::validate() const {
  if (!(eps_min > 0.0) || !(eps_min < eps_max)) throw ArgumentError("need 0 < eps_min < eps_max");
  if (!(shrink > 0.0 && shrink < 1.0)) throw ArgumentError("shrink factor must lie in (0, 1)");
  if (window < 1) throw ArgumentError("window must cover at least one point");
}

std::vector<double> LocalSearchConfig::step_schedule() const {
  validate();
  std::vector<double> steps;
  for (int m = 0;; ++m) {
    const double eps = eps_max * std::pow(shrink, m);
    if (eps < eps_min * (1.0 - 1e-9)) break;
    steps.push_back(eps);
  }
  return steps;
}

LocalSearchResult local_search(const Chromosome& start, const FitnessFn& fitness,
                               const LocalSearchConfig& config, const ConstraintSet& cs,
                               const ScheduleLayout& layout,
                               const std::function<void(const Chromosome&, double)>& on_evaluate) {
  const auto steps = config.step_schedule();
  if (!satisfies(start, cs, layout))
    throw ArgumentError("local search must start from a constraint-satisfying chromosome");

  LocalSearchResult r;
  r.best = start;
  auto score = [&](const Chromosome& c) {
    const double f = checked(fitness(c), c);
    ++r.evaluations;
    if (on_evaluate) on_evaluate(c, f);
    return f;
  };
  r.fitness = r.initial_fitness = score(start);

  const std::size_t genes = start.size();
  while (r.iterations < config.max_iterations && r.fitness < config.target_fidelity) {
    bool improved = false;
    for (double eps : steps) {
      for (std::size_t w = 0; w < genes && r.fitness < config.target_fidelity; w += config.window) {
        const std::size_t end = std::min(genes, w + config.window);
        for (double direction : {1.0, -1.0}) {
          bool moved = false;
          for (;;) {
            Chromosome candidate = r.best;
            for (std::size_t g = w; g < end; ++g) candidate.genes()[g] += direction * eps;
            if (!satisfies(candidate, cs, layout)) break;
            const double f = score(candidate);
            if (!(f > r.fitness)) break;
            r.best = std::move(candidate);
            r.fitness = f;
            moved = improved = true;
          }
          if (moved) break;
        }
      }
      r.sweeps.push_back({r.iterations, eps, r.fitness, r.evaluations});
      if (r.fitness >= config.target_fidelity) break;
    }
    ++r.iterations;
    // With no accepted move anywhere, the next iteration would retrace the same
    // deterministic sweeps without change.
    if (!improved) break;
  }
  r.reached_target = r.fitness >= config.target_fidelity;
  return r;
}

GateObjective::GateObjective(DeviceChain device, ComplexMatrix target, ScheduleLayout layout,
                             TrotterConfig trotter, PhaseFitOptions fit)
    : device_(std::move(device)),
      basis_(device_basis(device_)),
      projection_(basis_),
      target_(std::move(target)),
      layout_(std::move(layout)),
      trotter_(trotter),
      fit_(fit) {
  if (layout_.qubits != device_.size())
    throw ArgumentError("layout and device disagree on the number of qubits");
  if (target_.rows() != static_cast<Eigen::Index>(projection_.dimension()))
    throw ArgumentError("target dimension does not match the qubit subspace");
  trotter_.steps_for(layout_.segment_duration);
}

FidelityReport GateObjective::evaluate(const PulseSchedule& schedule) const {
  return evaluate(PiecewiseConstantWaveform(schedule));
}

FidelityReport GateObjective::evaluate(const Waveform& waveform) const {
  const auto u = evolve(device_, basis_, waveform, trotter_);
  return fidelity_report(projection_.apply(u.matrix()), target_, fit_);
}

double GateObjective::operator()(const Chromosome& c) const {
  try {
    return evaluate(c.to_schedule(layout_)).fidelity;
  } catch (const EvolutionError& e) {
    spdlog::warn("fitness scored 0: {}", e.what());
  } catch (const DegenerateUnitaryError& e) {
    spdlog::warn("fitness scored 0: {}", e.what());
  }
  return 0.0;
}

double fitness_ccphase(const Chromosome& c, const DeviceChain& device, const ScheduleLayout& layout,
                       const TrotterConfig& trotter) {
  return GateObjective(device, ccphase_ideal(), layout, trotter)(c);
}

}  // namespace ccphase
