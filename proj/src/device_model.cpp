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

#include "ccphase/device_model.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace ccphase {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ArgumentError(message);
}

}  // namespace

DeviceChain::DeviceChain(std::vector<TransmonSpec> transmons,
                         std::vector<ResonatorCoupling> couplings, int levels_per_transmon,
                         int max_total_excitation, double dispersive_floor)
    : transmons_(std::move(transmons)),
      couplings_(std::move(couplings)),
      levels_(levels_per_transmon),
      max_excitation_(max_total_excitation),
      floor_(dispersive_floor) {
  const auto n = transmons_.size();
  require(n >= 1, "device needs at least one transmon");
  require(levels_ >= 2 && levels_ <= 4, "levels_per_transmon must lie in [2, 4]");
  require(max_excitation_ >= 1 && max_excitation_ <= static_cast<int>(n) * (levels_ - 1),
          "max_total_excitation must lie in [1, n * (levels - 1)]");
  require(floor_ >= 0.0, "dispersive floor must be non-negative");
  require(couplings_.size() == n - 1, "a chain of n transmons needs exactly n - 1 resonators");

  for (std::size_t k = 0; k < n; ++k) {
    const auto& t = transmons_[k];
    require(t.index == k, "transmon " + std::to_string(k) + " carries index " +
                              std::to_string(t.index));
    require(t.bare_frequency > 0.0, "transmon " + std::to_string(k) + ": bare frequency must be > 0");
    require(t.idle_frequency > 0.0, "transmon " + std::to_string(k) + ": idle frequency must be > 0");
    require(!(levels_ >= 3 && t.anharmonicity == 0.0),
            "transmon " + std::to_string(k) + ": zero anharmonicity with levels >= 3");
  }
  for (std::size_t r = 0; r < couplings_.size(); ++r) {
    const auto& c = couplings_[r];
    require(c.left_index == r && c.right_index == r + 1,
            "resonator " + std::to_string(r) + " must couple transmons " + std::to_string(r) +
                " and " + std::to_string(r + 1));
    require(c.frequency > 0.0, "resonator " + std::to_string(r) + ": frequency must be > 0");
  }
  for (std::size_t k = 0; k < n; ++k) {
    check_dispersive(k, transmons_[k].bare_frequency);
    check_dispersive(k, transmons_[k].idle_frequency);
  }
}

std::vector<ResonatorSide> DeviceChain::adjacent_resonators(std::size_t k) const {
  std::vector<ResonatorSide> out;
  if (k > 0) {
    const auto& c = couplings_[k - 1];
    out.push_back({k - 1, c.frequency, c.g_right});
  }
  if (k + 1 < transmons_.size()) {
    const auto& c = couplings_[k];
    out.push_back({k, c.frequency, c.g_left});
  }
  return out;
}

std::vector<double> DeviceChain::bare_frequencies() const {
  std::vector<double> f;
  for (const auto& t : transmons_) f.push_back(t.bare_frequency);
  return f;
}

std::vector<double> DeviceChain::idle_frequencies() const {
  std::vector<double> f;
  for (const auto& t : transmons_) f.push_back(t.idle_frequency);
  return f;
}

DeviceChain DeviceChain::with_levels(int levels_per_transmon, int max_total_excitation) const {
  return DeviceChain(transmons_, couplings_, levels_per_transmon, max_total_excitation, floor_);
}

void DeviceChain::check_dispersive(std::size_t k, double frequency) const {
  const auto& t = transmons_.at(k);
  // Denominators of the dressed energies use (j - 1) * delta for j >= 1 and
  // those of the exchange use j * delta for j <= levels - 2: offsets 0..levels-2.
  for (const auto& r : adjacent_resonators(k)) {
    for (int m = 0; m <= levels_ - 2; ++m) {
      const double den = frequency + m * t.anharmonicity - r.frequency;
      if (std::abs(den) <= floor_) throw SingularityError(k, m + 1, r.resonator, den);
    }
  }
}

TruncatedBasis::TruncatedBasis(std::size_t transmons, int levels, int max_excitation)
    : transmons_(transmons), levels_(levels), max_excitation_(max_excitation) {
  require(transmons >= 1, "basis needs n >= 1");
  require(levels >= 2, "basis needs j_max >= 2");
  require(max_excitation >= 1, "basis needs e_max >= 1");

  // Odometer over levels^n with the last transmon fastest gives lexicographic order.
  Occupation occ(transmons, 0);
  for (;;) {
    int total = 0;
    for (int j : occ) total += j;
    if (total <= max_excitation) {
      index_.emplace(occ, states_.size());
      states_.push_back(occ);
      excitation_.push_back(total);
    }
    bool wrapped = true;
    for (std::size_t pos = transmons; pos-- > 0;) {
      if (++occ[pos] < levels) {
        wrapped = false;
        break;
      }
      occ[pos] = 0;
    }
    if (wrapped) break;
  }

  for (std::size_t from = 0; from < states_.size(); ++from) {
    const auto& s = states_[from];
    for (std::size_t k = 0; k + 1 < transmons; ++k) {
      if (s[k] < 1 || s[k + 1] > levels - 2) continue;
      Occupation dest = s;
      dest[k] -= 1;
      dest[k + 1] += 1;
      const auto to = index_of(dest);
      if (to == npos) continue;
      hops_.push_back({from, to, k, s[k] - 1, s[k + 1]});
    }
  }
}

std::size_t TruncatedBasis::index_of(const Occupation& occupation) const {
  const auto it = index_.find(occupation);
  return it == index_.end() ? npos : it->second;
}

TruncatedBasis enumerate_basis(std::size_t n, int j_max, int e_max) {
  return TruncatedBasis(n, j_max, e_max);
}

TruncatedBasis device_basis(const DeviceChain& device) {
  return TruncatedBasis(device.size(), device.levels_per_transmon(),
                        device.max_total_excitation());
}

TruncatedBasis full_basis(const DeviceChain& device) {
  const int levels = device.levels_per_transmon();
  return TruncatedBasis(device.size(), levels, static_cast<int>(device.size()) * (levels - 1));
}

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
  require(m_.rows() == m_.cols(), "operator must be square");
  const double asym = m_.size() == 0 ? 0.0 : (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  require(asym <= kTolerance, "operator is not Hermitian (max |H - H^dagger| = " +
                                  std::to_string(asym) + ")");
}

double dressed_frequency(const TransmonSpec& transmon, int level, double current_frequency,
                         std::span<const ResonatorSide> resonators, double dispersive_floor) {
  require(level >= 0, "level must be non-negative");
  if (level == 0) return 0.0;
  const double j = level;
  const double delta = transmon.anharmonicity;
  double w = j * current_frequency + 0.5 * delta * (j - 1.0) * j;
  for (const auto& r : resonators) {
    const double den = current_frequency - r.frequency + (j - 1.0) * delta;
    if (std::abs(den) <= dispersive_floor)
      throw SingularityError(transmon.index, level, r.resonator, den);
    w += j * r.g * r.g / den;
  }
  return w;
}

double coupling_strength(const TransmonSpec& left, double left_frequency, int left_level,
                         const TransmonSpec& right, double right_frequency, int right_level,
                         const ResonatorCoupling& coupling, double dispersive_floor) {
  const double a = left_frequency + left.anharmonicity * left_level - coupling.frequency;
  const double b = right_frequency + right.anharmonicity * right_level - coupling.frequency;
  if (std::abs(a) <= dispersive_floor)
    throw SingularityError(left.index, left_level, coupling.left_index, a);
  if (std::abs(b) <= dispersive_floor)
    throw SingularityError(right.index, right_level, coupling.left_index, b);
  return coupling.g_left * coupling.g_right * (a + b) / (2.0 * a * b);
}

HermitianOperator build_hamiltonian(const DeviceChain& device, const TruncatedBasis& basis,
                                    std::span<const double> frequencies) {
  const auto n = device.size();
  require(frequencies.size() == n, "expected " + std::to_string(n) + " frequencies, got " +
                                       std::to_string(frequencies.size()));
  require(basis.transmons() == n, "basis and device disagree on the number of transmons");
  require(basis.levels() <= device.levels_per_transmon(),
          "basis models more levels than the device");
  const int levels = basis.levels();
  const double floor = device.dispersive_floor();

  // dressed[k][j] and exchange[k][j_k][j_k+1] tables, GHz.
  std::vector<std::vector<double>> dressed(n, std::vector<double>(levels, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    device.check_dispersive(k, frequencies[k]);
    const auto resonators = device.adjacent_resonators(k);
    for (int j = 0; j < levels; ++j)
      dressed[k][j] = dressed_frequency(device.transmons()[k], j, frequencies[k], resonators, floor);
  }
  const int edge = levels - 1;
  std::vector<std::vector<double>> exchange(n > 0 ? n - 1 : 0, std::vector<double>(edge * edge, 0.0));
  for (std::size_t k = 0; k + 1 < n; ++k) {
    for (int jl = 0; jl < edge; ++jl)
      for (int jr = 0; jr < edge; ++jr)
        exchange[k][jl * edge + jr] = coupling_strength(
            device.transmons()[k], frequencies[k], jl, device.transmons()[k + 1],
            frequencies[k + 1], jr, device.couplings()[k], floor);
  }

  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto& s = basis.state(static_cast<std::size_t>(i));
    double e = 0.0;
    for (std::size_t k = 0; k < n; ++k) e += dressed[k][s[k]];
    h(i, i) = kTwoPi * e;
  }
  for (const auto& hop : basis.hops()) {
    const double amp = std::sqrt(hop.left_level + 1.0) * std::sqrt(hop.right_level + 1.0) *
                       exchange[hop.pair][hop.left_level * edge + hop.right_level];
    const auto from = static_cast<Eigen::Index>(hop.from);
    const auto to = static_cast<Eigen::Index>(hop.to);
    h(to, from) += kTwoPi * amp;
    h(from, to) += kTwoPi * amp;
  }
  return HermitianOperator(std::move(h));
}

}  // namespace ccphase
