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

// Scoring of an evolved unitary against a target gate on the qubit subspace.
//
// Computational states are ordered |0..00>, |0..01>, ... in binary with the
// first transmon as the most significant bit, so for three transmons
// (L, M, R) index 1 is |001> (R excited), 2 is |010> and 4 is |100>.

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "ccphase/device_model.hpp"
#include "ccphase/propagator.hpp"

namespace ccphase {

// Row/column indices of the 2^n qubit states inside a truncated basis.
class ComputationalProjection {
 public:
  // Throws ArgumentError when some qubit state was truncated away.
  explicit ComputationalProjection(const TruncatedBasis& basis);

  std::size_t qubits() const noexcept { return qubits_; }
  std::size_t dimension() const noexcept { return indices_.size(); }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

  ComplexMatrix apply(const ComplexMatrix& u) const;

 private:
  std::size_t qubits_;
  std::vector<std::size_t> indices_;
};

// Single-qubit Z compensation. bit_phase[b] is the phase theta_{2^b} attached
// to the qubit whose excitation sets bit b of the state index; for three
// qubits these are theta1, theta2, theta4.
struct CompensationPhases {
  double global = 0.0;
  std::vector<double> bit_phase;

  static CompensationPhases zeros(std::size_t qubits) { return {0.0, std::vector<double>(qubits, 0.0)}; }
  double theta(std::size_t weight) const;  // weight = 2^b
  // Phase applied to computational index s: sum of bit_phase over set bits.
  double state_phase(std::size_t s) const;
  // Every phase reduced to (-pi, pi].
  CompensationPhases reduced() const;
};

double wrap_phase(double phi);

struct FidelityReport {
  double fidelity = 0.0;
  CompensationPhases phases;
  ComplexMatrix compensated;  // U_proj * M
};

// diag(1, ..., 1, -1) on n qubits; the three-qubit case is the CCPhase gate.
ComplexMatrix controlled_phase_ideal(std::size_t qubits);
ComplexMatrix ccphase_ideal();

ComplexMatrix project_to_computational(const Unitary& u, const TruncatedBasis& basis);

// M = e^{-i theta0} diag(e^{-i phase(s)}).
ComplexMatrix compensation_matrix(const CompensationPhases& phases);

struct PhaseFitOptions {
  bool refine = true;
  double tolerance = 1e-9;  // rad
  int max_sweeps = 200;
};

// Closed form from the diagonal arguments at |0..0> and the single-excitation
// states. Throws DegenerateUnitaryError when one of those entries vanishes.
CompensationPhases fit_phases(const ComplexMatrix& u);

// Closed form followed by exact coordinate ascent of the fidelity over the
// per-qubit phases (each coordinate maximises |A + B e^{-i theta}|).
CompensationPhases fit_phases(const ComplexMatrix& u, const ComplexMatrix& target,
                              const PhaseFitOptions& options = {});

// [Tr(U^dag U) + |Tr(T^dag U)|^2] / (d (d + 1)) with U = u * M(phases).
double gate_fidelity(const ComplexMatrix& u, const ComplexMatrix& target,
                     const CompensationPhases& phases);
// Same with fitted phases.
double gate_fidelity(const ComplexMatrix& u, const ComplexMatrix& target,
                     const PhaseFitOptions& options = {});

FidelityReport fidelity_report(const ComplexMatrix& u, const ComplexMatrix& target,
                               const PhaseFitOptions& options = {});

nlohmann::json report_to_json(const FidelityReport& report);

}  // namespace ccphase
