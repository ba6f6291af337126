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

#include "ccphase/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace ccphase {

PulseSchedule::PulseSchedule(Eigen::MatrixXd detunings, std::vector<double> search_references,
                             double segment_duration)
    : detunings_(std::move(detunings)),
      references_(std::move(search_references)),
      segment_duration_(segment_duration) {
  if (static_cast<std::size_t>(detunings_.rows()) != references_.size())
    throw ArgumentError("schedule has " + std::to_string(detunings_.rows()) + " rows but " +
                        std::to_string(references_.size()) + " search references");
  if (!(segment_duration_ > 0.0)) throw ArgumentError("segment duration must be positive");
  if (!detunings_.allFinite()) throw ArgumentError("schedule contains non-finite detunings");
}

PulseSchedule PulseSchedule::zeros(std::vector<double> search_references, std::size_t segments,
                                   double segment_duration) {
  const auto rows = static_cast<Eigen::Index>(search_references.size());
  return PulseSchedule(Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(segments)),
                       std::move(search_references), segment_duration);
}

ConstantWaveform::ConstantWaveform(std::vector<double> frequencies, double duration)
    : frequencies_(std::move(frequencies)), duration_(duration) {
  if (duration_ < 0.0) throw ArgumentError("waveform duration must be non-negative");
}

void ConstantWaveform::sample(double, std::span<double> out) const {
  std::copy(frequencies_.begin(), frequencies_.end(), out.begin());
}

PiecewiseConstantWaveform::PiecewiseConstantWaveform(PulseSchedule schedule)
    : schedule_(std::move(schedule)) {}

void PiecewiseConstantWaveform::sample(double t, std::span<double> out) const {
  const auto segments = schedule_.segments();
  if (segments == 0) {
    for (std::size_t k = 0; k < schedule_.qubits(); ++k) out[k] = schedule_.search_references()[k];
    return;
  }
  auto seg = static_cast<std::size_t>(std::max(0.0, std::floor(t / schedule_.segment_duration())));
  seg = std::min(seg, segments - 1);
  for (std::size_t k = 0; k < schedule_.qubits(); ++k) out[k] = schedule_.absolute_frequency(k, seg);
}

double Unitary::unitarity_error() const {
  if (m_.size() == 0) return 0.0;
  const auto id = ComplexMatrix::Identity(m_.rows(), m_.cols());
  return (m_.adjoint() * m_ - id).cwiseAbs().maxCoeff();
}

std::size_t TrotterConfig::steps_for(double duration) const {
  if (!(step > 0.0)) throw ArgumentError("Trotter step must be positive");
  if (duration < 0.0) throw ArgumentError("duration must be non-negative");
  const double exact = duration / step;
  const double rounded = std::round(exact);
  if (std::abs(rounded * step - duration) > 1e-9)
    throw ArgumentError("Trotter step " + std::to_string(step) + " ns does not divide " +
                        std::to_string(duration) + " ns");
  return static_cast<std::size_t>(rounded);
}

void check_trotter(const PulseSchedule& schedule, const TrotterConfig& trotter) {
  trotter.steps_for(schedule.segment_duration());
}

namespace {

// Groups of indices coupled through nonzero entries. Exponentiating each
// group on its own keeps zero blocks exactly zero.
std::vector<std::vector<Eigen::Index>> coupled_groups(const ComplexMatrix& m) {
  const Eigen::Index d = m.rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) parent[static_cast<std::size_t>(i)] = i;
  auto root = [&](Eigen::Index i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)];
    return i;
  };
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < c; ++r)
      if (m(r, c) != Complex(0.0, 0.0)) {
        const auto a = root(r);
        const auto b = root(c);
        parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
  std::vector<std::vector<Eigen::Index>> groups;
  std::vector<std::size_t> slot(static_cast<std::size_t>(d), SIZE_MAX);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto r = static_cast<std::size_t>(root(i));
    if (slot[r] == SIZE_MAX) {
      slot[r] = groups.size();
      groups.emplace_back();
    }
    groups[slot[r]].push_back(i);
  }
  return groups;
}

}  // namespace

Unitary expm_skew(const HermitianOperator& h, double dt) {
  if (dt < 0.0) throw ArgumentError("time step must be non-negative");
  const auto& m = h.matrix();
  if (m.size() == 0) return Unitary(m);
  ComplexMatrix u = ComplexMatrix::Zero(m.rows(), m.cols());
  for (const auto& g : coupled_groups(m)) {
    const auto k = static_cast<Eigen::Index>(g.size());
    ComplexMatrix block(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b) block(a, b) = m(g[a], g[b]);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(block);
    const Eigen::VectorXcd phases =
        (es.eigenvalues().cast<Complex>() * Complex(0.0, -dt)).array().exp().matrix();
    const auto& v = es.eigenvectors();
    const ComplexMatrix e = v * phases.asDiagonal() * v.adjoint();
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b) u(g[a], g[b]) = e(a, b);
  }
  return Unitary(std::move(u));
}

Unitary expm_skew(const ComplexMatrix& h, double dt) {
  return expm_skew(HermitianOperator(h), dt);
}

void for_each_hamiltonian_run(const DeviceChain& device, const TruncatedBasis& basis,
                              const Waveform& waveform, const TrotterConfig& trotter,
                              const RunVisitor& visit) {
  const auto n = waveform.qubits();
  if (n != device.size())
    throw ArgumentError("waveform drives " + std::to_string(n) + " qubits, device has " +
                        std::to_string(device.size()));
  const auto steps = trotter.steps_for(waveform.duration());

  std::vector<double> current(n), next(n);
  std::size_t run_start = 0;
  auto build = [&](const std::vector<double>& freqs, double t) {
    try {
      return build_hamiltonian(device, basis, freqs);
    } catch (const SingularityError& e) {
      throw EvolutionError(t, e.transmon(), e.what());
    }
  };

  for (std::size_t i = 0; i < steps; ++i) {
    const double t = (static_cast<double>(i) + 0.5) * trotter.step;
    waveform.sample(t, next);
    for (double f : next)
      if (!std::isfinite(f)) throw EvolutionError(t, 0, "non-finite waveform sample");
    if (i == 0) {
      current = next;
      continue;
    }
    if (next != current) {
      const double t0 = static_cast<double>(run_start) * trotter.step;
      visit(build(current, t0 + 0.5 * trotter.step), i - run_start, t0);
      current = next;
      run_start = i;
    }
  }
  if (steps > 0) {
    const double t0 = static_cast<double>(run_start) * trotter.step;
    visit(build(current, t0 + 0.5 * trotter.step), steps - run_start, t0);
  }
}

Unitary evolve(const DeviceChain& device, const TruncatedBasis& basis, const Waveform& waveform,
               const TrotterConfig& trotter) {
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for_each_hamiltonian_run(device, basis, waveform, trotter,
                           [&](const HermitianOperator& h, std::size_t steps, double) {
                             const auto factor = expm_skew(h, static_cast<double>(steps) * trotter.step);
                             u = factor.matrix() * u;
                           });
  return Unitary(std::move(u));
}

Unitary evolve(const DeviceChain& device, const Waveform& waveform, const TrotterConfig& trotter) {
  return evolve(device, device_basis(device), waveform, trotter);
}

}  // namespace ccphase
