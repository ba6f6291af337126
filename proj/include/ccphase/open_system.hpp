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

// Density-matrix evolution on the full (untruncated) transmon space, with an
// optional Lindblad dissipator, and simulated process tomography on the
// qubit subspace.

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ccphase/device_model.hpp"
#include "ccphase/gate_fidelity.hpp"
#include "ccphase/propagator.hpp"

namespace ccphase {

class DensityMatrix {
 public:
  static constexpr double kHermitianTolerance = 1e-10;
  static constexpr double kTraceTolerance = 1e-8;
  static constexpr double kEigenvalueFloor = -1e-8;

  DensityMatrix() = default;
  explicit DensityMatrix(ComplexMatrix rho);
  static DensityMatrix pure(const Eigen::VectorXcd& psi);

  const ComplexMatrix& matrix() const noexcept { return rho_; }
  Eigen::Index dimension() const noexcept { return rho_.rows(); }
  double purity() const;
  double min_eigenvalue() const;

 private:
  ComplexMatrix rho_;
};

// Coherence times in microseconds, one per transmon. Infinity disables the channel.
struct LindbladSpec {
  std::vector<double> t1_us;
  std::vector<double> t2_us;

  static LindbladSpec uniform(std::size_t transmons, double t1_us, double t2_us);
  void validate(std::size_t transmons) const;

  double relaxation_rate(std::size_t k) const;  // 1/T1, per ns
  double dephasing_rate(std::size_t k) const;   // 1/T_phi, per ns
  double pure_dephasing_time_us(std::size_t k) const;
};

// Index of an occupation in the full space: sum_k j_k * levels^(n-1-k).
std::size_t full_index(const Occupation& occupation, int levels);

// Lindblad right-hand side restricted to the dissipator, for tests and
// diagnostics; the coherent part is applied as exact unitary conjugation.
class Dissipator {
 public:
  Dissipator(std::size_t transmons, int levels, const LindbladSpec& spec);
  ComplexMatrix apply(const ComplexMatrix& rho) const;
  // rho + h D(rho) + h^2/2 D(D(rho))
  void step(ComplexMatrix& rho, double h) const;
  bool trivial() const noexcept { return trivial_; }

 private:
  struct Jump {
    Eigen::Index from;
    Eigen::Index to;
    double amplitude;  // sqrt(gamma_1 * j)
  };
  std::vector<std::vector<Jump>> jumps_;  // per transmon
  Eigen::MatrixXd decay_;
  bool trivial_ = true;
};

// Evolves every input over the waveform. Inputs live on the full space of
// `device` (levels^n). Without decoherence the inputs are conjugated by the
// full-space propagator; otherwise each Trotter step is a symmetric split
// D(dt/2) U D(dt/2).
std::vector<ComplexMatrix> evolve_densities(std::vector<ComplexMatrix> inputs,
                                            const DeviceChain& device, const Waveform& waveform,
                                            const TrotterConfig& trotter = {},
                                            const std::optional<LindbladSpec>& lindblad = {},
                                            std::size_t threads = 0);

DensityMatrix evolve_density(const DensityMatrix& rho0, const DeviceChain& device,
                             const Waveform& waveform, const TrotterConfig& trotter = {},
                             const std::optional<LindbladSpec>& lindblad = {});

// {I, Rx(pi/2), Ry(pi/2), Rx(pi)} on each qubit applied to |0...0>, base-4
// index with the first transmon most significant.
std::vector<DensityMatrix> prepare_qpt_inputs(std::size_t qubits = 3, int levels = 4);

// Qubit block of a full-space operator, binary order with the first transmon
// as most significant bit. No renormalization.
ComplexMatrix reduce_to_computational(const ComplexMatrix& rho, std::size_t qubits, int levels);

// {I,X,Y,Z} tensor products, base-4 index with the first qubit most significant.
ComplexMatrix pauli_operator(std::size_t index, std::size_t qubits);

class ProcessMatrix {
 public:
  ProcessMatrix() = default;
  explicit ProcessMatrix(ComplexMatrix chi);

  const ComplexMatrix& matrix() const noexcept { return chi_; }
  std::size_t qubits() const noexcept { return qubits_; }
  Complex operator()(Eigen::Index m, Eigen::Index n) const { return chi_(m, n); }

 private:
  ComplexMatrix chi_;
  std::size_t qubits_ = 0;
};

// Linear inversion over the Pauli basis, then Hermitian part, clipped
// eigenvalues and unit trace.
ProcessMatrix estimate_chi(const std::vector<ComplexMatrix>& inputs,
                           const std::vector<ComplexMatrix>& outputs);

ProcessMatrix ideal_chi(const ComplexMatrix& unitary);

struct QPTReport {
  double process_fidelity = 0.0;
  double average_gate_fidelity = 0.0;
  double average_purity = 0.0;
};

QPTReport qpt_metrics(const ProcessMatrix& chi, const ProcessMatrix& ideal);

struct QPTOptions {
  TrotterConfig trotter;
  std::optional<LindbladSpec> lindblad;
  bool compensate = true;  // apply the closed-system phase fit to the inputs
  std::size_t threads = 0;
};

struct QPTResult {
  ProcessMatrix chi;
  ProcessMatrix ideal;
  QPTReport report;
  FidelityReport closed;  // closed-system gate fidelity of the same pulse
  double mean_leakage = 0.0;  // 1 - mean trace of the reduced outputs
};

QPTResult run_qpt(const DeviceChain& device, const Waveform& waveform, const ComplexMatrix& target,
                  const QPTOptions& options = {});

}  // namespace ccphase
