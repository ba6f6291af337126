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

// Effective Hamiltonian of a linear chain of flux-tunable transmons with
// nearest-neighbour resonator couplings, in the dispersive regime where the
// resonators stay empty.
//
// Frequencies are plain GHz everywhere in the public interface. Operators are
// returned in angular units (rad/ns), i.e. every GHz quantity is multiplied by
// 2*pi when it enters a matrix, so exp(-i H t) with t in ns is dimensionless.

#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ccphase/errors.hpp"

namespace ccphase {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kDefaultDispersiveFloor = 0.1;  // GHz

struct TransmonSpec {
  std::size_t index = 0;       // position in the chain
  double bare_frequency = 0;   // GHz, 0-1 transition
  double anharmonicity = 0;    // GHz, negative for transmons
  double idle_frequency = 0;   // GHz, park frequency outside the gate
};

// Resonator between transmons left_index and left_index + 1.
struct ResonatorCoupling {
  std::size_t left_index = 0;
  std::size_t right_index = 1;
  double frequency = 0;  // GHz
  double g_left = 0;     // GHz
  double g_right = 0;    // GHz
};

// One resonator as seen from a particular transmon.
struct ResonatorSide {
  std::size_t resonator = 0;
  double frequency = 0;  // GHz
  double g = 0;          // GHz, coupling of this transmon to the resonator
};

class DeviceChain {
 public:
  DeviceChain(std::vector<TransmonSpec> transmons, std::vector<ResonatorCoupling> couplings,
              int levels_per_transmon = 4, int max_total_excitation = 3,
              double dispersive_floor = kDefaultDispersiveFloor);

  std::size_t size() const noexcept { return transmons_.size(); }
  const std::vector<TransmonSpec>& transmons() const noexcept { return transmons_; }
  const std::vector<ResonatorCoupling>& couplings() const noexcept { return couplings_; }
  int levels_per_transmon() const noexcept { return levels_; }
  int max_total_excitation() const noexcept { return max_excitation_; }
  double dispersive_floor() const noexcept { return floor_; }

  // Resonators attached to transmon k (one at the chain ends, two inside).
  std::vector<ResonatorSide> adjacent_resonators(std::size_t k) const;

  std::vector<double> bare_frequencies() const;
  std::vector<double> idle_frequencies() const;

  // Same physical chain with a different level model.
  DeviceChain with_levels(int levels_per_transmon, int max_total_excitation) const;

  // Throws SingularityError when transmon k parked at `frequency` would hit a
  // dispersive denominator within the floor.
  void check_dispersive(std::size_t k, double frequency) const;

 private:
  std::vector<TransmonSpec> transmons_;
  std::vector<ResonatorCoupling> couplings_;
  int levels_;
  int max_excitation_;
  double floor_;
};

using Occupation = std::vector<int>;

// Exchange of one excitation between neighbours k, k+1: the state
// |.., j_k + 1, j_{k+1}, ..> at `from` maps onto |.., j_k, j_{k+1} + 1, ..> at `to`.
struct Hop {
  std::size_t from = 0;
  std::size_t to = 0;
  std::size_t pair = 0;
  int left_level = 0;   // j_k
  int right_level = 0;  // j_{k+1}
};

class TruncatedBasis {
 public:
  TruncatedBasis(std::size_t transmons, int levels, int max_excitation);

  std::size_t dimension() const noexcept { return states_.size(); }
  std::size_t transmons() const noexcept { return transmons_; }
  int levels() const noexcept { return levels_; }
  int max_excitation() const noexcept { return max_excitation_; }

  const std::vector<Occupation>& states() const noexcept { return states_; }
  const Occupation& state(std::size_t i) const { return states_.at(i); }
  const std::vector<Hop>& hops() const noexcept { return hops_; }
  const std::vector<int>& excitations() const noexcept { return excitation_; }

  // Index of an occupation vector, or nullopt-like npos when truncated away.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t index_of(const Occupation& occupation) const;
  bool contains(const Occupation& occupation) const { return index_of(occupation) != npos; }

 private:
  std::size_t transmons_;
  int levels_;
  int max_excitation_;
  std::vector<Occupation> states_;
  std::vector<int> excitation_;
  std::map<Occupation, std::size_t> index_;
  std::vector<Hop> hops_;
};

// All occupation vectors with levels < j_max and total excitation <= e_max,
// lexicographically ascending.
TruncatedBasis enumerate_basis(std::size_t n, int j_max, int e_max);

// Basis of the device's own truncation.
TruncatedBasis device_basis(const DeviceChain& device);

// Untruncated tensor-product basis (levels^n states) of the device.
TruncatedBasis full_basis(const DeviceChain& device);

class HermitianOperator {
 public:
  static constexpr double kTolerance = 1e-12;

  // Throws ArgumentError if m is not square or not Hermitian to kTolerance.
  explicit HermitianOperator(ComplexMatrix m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dimension() const noexcept { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

// Dressed energy of level j (GHz), summing one Lamb-shift term per resonator.
double dressed_frequency(const TransmonSpec& transmon, int level, double current_frequency,
                         std::span<const ResonatorSide> resonators,
                         double dispersive_floor = kDefaultDispersiveFloor);

// Resonator-mediated exchange J_{j_k, j_{k+1}} in GHz.
double coupling_strength(const TransmonSpec& left, double left_frequency, int left_level,
                         const TransmonSpec& right, double right_frequency, int right_level,
                         const ResonatorCoupling& coupling,
                         double dispersive_floor = kDefaultDispersiveFloor);

// H in rad/ns on `basis`, with transmon k tuned to frequencies[k] (GHz).
HermitianOperator build_hamiltonian(const DeviceChain& device, const TruncatedBasis& basis,
                                    std::span<const double> frequencies);

}  // namespace ccphase
