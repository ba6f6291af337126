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

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ccphase/device_model.hpp"

namespace ccphase {

// Per-qubit piecewise-constant detunings (GHz) relative to search references.
class PulseSchedule {
 public:
  PulseSchedule() = default;
  PulseSchedule(Eigen::MatrixXd detunings, std::vector<double> search_references,
                double segment_duration = 1.0);

  // All-zero schedule of the given shape.
  static PulseSchedule zeros(std::vector<double> search_references, std::size_t segments,
                             double segment_duration = 1.0);

  std::size_t qubits() const noexcept { return static_cast<std::size_t>(detunings_.rows()); }
  std::size_t segments() const noexcept { return static_cast<std::size_t>(detunings_.cols()); }
  double segment_duration() const noexcept { return segment_duration_; }
  double duration() const noexcept { return segment_duration_ * static_cast<double>(segments()); }

  const Eigen::MatrixXd& detunings() const noexcept { return detunings_; }
  Eigen::MatrixXd& detunings() noexcept { return detunings_; }
  const std::vector<double>& search_references() const noexcept { return references_; }

  double detuning(std::size_t qubit, std::size_t segment) const {
    return detunings_(static_cast<Eigen::Index>(qubit), static_cast<Eigen::Index>(segment));
  }
  double absolute_frequency(std::size_t qubit, std::size_t segment) const {
    return references_[qubit] + detuning(qubit, segment);
  }

 private:
  Eigen::MatrixXd detunings_;
  std::vector<double> references_;
  double segment_duration_ = 1.0;
};

// Absolute per-qubit frequencies (GHz) as a function of time on [0, duration].
class Waveform {
 public:
  virtual ~Waveform() = default;
  virtual std::size_t qubits() const = 0;
  virtual double duration() const = 0;
  // Writes qubits() frequencies at time t into out.
  virtual void sample(double t, std::span<double> out) const = 0;
};

class ConstantWaveform final : public Waveform {
 public:
  ConstantWaveform(std::vector<double> frequencies, double duration);
  std::size_t qubits() const override { return frequencies_.size(); }
  double duration() const override { return duration_; }
  void sample(double t, std::span<double> out) const override;

 private:
  std::vector<double> frequencies_;
  double duration_;
};

class PiecewiseConstantWaveform final : public Waveform {
 public:
  explicit PiecewiseConstantWaveform(PulseSchedule schedule);
  std::size_t qubits() const override { return schedule_.qubits(); }
  double duration() const override { return schedule_.duration(); }
  void sample(double t, std::span<double> out) const override;
  const PulseSchedule& schedule() const noexcept { return schedule_; }

 private:
  PulseSchedule schedule_;
};

class Unitary {
 public:
  Unitary() = default;
  explicit Unitary(ComplexMatrix m) : m_(std::move(m)) {}
  static Unitary identity(Eigen::Index dim) { return Unitary(ComplexMatrix::Identity(dim, dim)); }

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dimension() const noexcept { return m_.rows(); }
  // max |U^dagger U - I|
  double unitarity_error() const;

 private:
  ComplexMatrix m_;
};

struct TrotterConfig {
  double step = 0.1;  // ns

  // Number of steps covering `duration`; throws ArgumentError unless the step
  // divides it to within 1e-9 ns.
  std::size_t steps_for(double duration) const;
};

// Throws ArgumentError unless trotter.step divides the segment duration.
void check_trotter(const PulseSchedule& schedule, const TrotterConfig& trotter);

// exp(-i H dt) through the eigendecomposition of H.
Unitary expm_skew(const HermitianOperator& h, double dt);
Unitary expm_skew(const ComplexMatrix& h, double dt);

// Product U_k ... U_1 of step exponentials of H sampled at the midpoint of
// each Trotter step. Runs of bit-identical samples are exponentiated at once
// over their combined length, which is exact because the factors commute.
Unitary evolve(const DeviceChain& device, const TruncatedBasis& basis, const Waveform& waveform,
               const TrotterConfig& trotter = {});
Unitary evolve(const DeviceChain& device, const Waveform& waveform,
               const TrotterConfig& trotter = {});

// Walks the Trotter grid of `waveform`, sampling H at each step midpoint, and
// calls visit(H, steps, start_ns) once per run of consecutive steps that share
// bit-identical frequencies. Shared by the unitary and density-matrix
// integrators so both sample the waveform the same way. Singularities are
// rethrown as EvolutionError carrying the sample time.
using RunVisitor = std::function<void(const HermitianOperator&, std::size_t, double)>;
void for_each_hamiltonian_run(const DeviceChain& device, const TruncatedBasis& basis,
                              const Waveform& waveform, const TrotterConfig& trotter,
                              const RunVisitor& visit);

}  // namespace ccphase
