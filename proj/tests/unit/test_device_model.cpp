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

#include <doctest.h>

#include <random>

#include "ccphase/device_model.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ccphase;

namespace {

std::size_t brute_force_count(int n, int levels, int emax) {
  return oracle::truncated_indices(n, levels, emax).size();
}

}  // namespace

TEST_CASE("basis for three ququarts with at most three excitations has the listed 20 states") {
  const auto basis = enumerate_basis(3, 4, 3);
  const std::vector<std::string> expected = {"000", "001", "002", "003", "010", "011", "012",
                                             "020", "021", "030", "100", "101", "102", "110",
                                             "111", "120", "200", "201", "210", "300"};
  REQUIRE(basis.dimension() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    std::string s;
    for (int j : basis.state(i)) s += static_cast<char>('0' + j);
    CHECK(s == expected[i]);
    CHECK(basis.index_of(basis.state(i)) == i);
  }
}

TEST_CASE("basis sizes agree with exhaustive counting") {
  CHECK(enumerate_basis(1, 4, 3).dimension() == 4);
  CHECK(enumerate_basis(2, 4, 3).dimension() == 10);
  std::size_t pairs = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (a + b <= 3) ++pairs;
  CHECK(pairs == 10);
  for (int n = 1; n <= 4; ++n)
    for (int levels = 2; levels <= 4; ++levels)
      for (int emax = 1; emax <= n * (levels - 1); ++emax)
        CHECK(enumerate_basis(n, levels, emax).dimension() == brute_force_count(n, levels, emax));
}

TEST_CASE("invalid basis bounds are rejected") {
  CHECK_THROWS_AS(enumerate_basis(0, 4, 3), ArgumentError);
  CHECK_THROWS_AS(enumerate_basis(3, 1, 3), ArgumentError);
  CHECK_THROWS_AS(enumerate_basis(3, 4, 0), ArgumentError);
}

TEST_CASE("hops move one excitation between neighbours and stay inside the basis") {
  const auto basis = enumerate_basis(3, 4, 3);
  for (const auto& h : basis.hops()) {
    const auto& from = basis.state(h.from);
    const auto& to = basis.state(h.to);
    CHECK(from[h.pair] == h.left_level + 1);
    CHECK(from[h.pair + 1] == h.right_level);
    CHECK(to[h.pair] == h.left_level);
    CHECK(to[h.pair + 1] == h.right_level + 1);
    CHECK(basis.excitations()[h.from] == basis.excitations()[h.to]);
  }
}

TEST_CASE("dressed frequencies match hand evaluation") {
  const TransmonSpec t{0, 5.0, -0.3, 5.0};
  const std::vector<ResonatorSide> one = {{0, 8.05, 0.2}};
  CHECK(dressed_frequency(t, 0, 5.0, one) == 0.0);
  CHECK(dressed_frequency(t, 1, 5.0, one) == doctest::Approx(4.9868852).epsilon(1e-8));
  CHECK(dressed_frequency(t, 2, 5.0, one) == doctest::Approx(9.6761194).epsilon(1e-8));
  const std::vector<ResonatorSide> two = {{0, 8.05, 0.2}, {1, 8.2, 0.1}};
  const double expected = 2 * 5.0 - 0.3 + 2 * 0.04 / (5.0 - 8.05 - 0.3) + 2 * 0.01 / (5.0 - 8.2 - 0.3);
  CHECK(dressed_frequency(t, 2, 5.0, two) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("exchange coupling matches hand evaluation and is symmetric") {
  const TransmonSpec l{0, 5.0, -0.3, 5.0};
  const TransmonSpec m{1, 6.0, -0.3, 6.0};
  const ResonatorCoupling c{0, 1, 8.05, 0.2, 0.2};
  const double j = coupling_strength(l, 5.0, 0, m, 6.0, 0, c);
  CHECK(j == doctest::Approx(-0.0163135).epsilon(1e-6));
  CHECK(j == doctest::Approx(0.04 * (-5.1) / (2 * (-3.05) * (-2.05))).epsilon(1e-14));
  CHECK(coupling_strength(m, 6.0, 0, l, 5.0, 0, c) == doctest::Approx(j).epsilon(1e-15));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK(coupling_strength(l, 5.1, a, m, 5.9, b, c) ==
            doctest::Approx(coupling_strength(m, 5.9, b, l, 5.1, a, c)).epsilon(1e-14));
}

TEST_CASE("exchange coupling is linear in each g") {
  const TransmonSpec l{0, 5.0, -0.3, 5.0};
  const TransmonSpec m{1, 6.0, -0.3, 6.0};
  const ResonatorCoupling c{0, 1, 8.05, 0.2, 0.2};
  const double base = coupling_strength(l, 5.3, 1, m, 6.1, 0, c);
  for (double s : {0.5, 1e-3, 0.0}) {
    ResonatorCoupling scaled = c;
    scaled.g_left *= s;
    CHECK(coupling_strength(l, 5.3, 1, m, 6.1, 0, scaled) == doctest::Approx(s * base).epsilon(1e-14));
  }
}

TEST_CASE("poles raise singularity errors naming the transmon, level and resonator") {
  const TransmonSpec l{0, 5.0, -0.3, 5.0};
  const TransmonSpec m{1, 6.0, -0.3, 6.0};
  const ResonatorCoupling c{0, 1, 8.05, 0.2, 0.2};
  // 8.35 - 0.3 = 8.05 exactly on the resonator.
  CHECK_THROWS_AS(coupling_strength(l, 8.35, 1, m, 6.0, 0, c), SingularityError);
  // An exact pole still throws with a zero floor.
  CHECK_THROWS_AS(coupling_strength(l, 8.05, 0, m, 6.0, 0, c, 0.0), SingularityError);
  try {
    const std::vector<ResonatorSide> one = {{3, 8.05, 0.2}};
    dressed_frequency(l, 2, 8.33, one);
    FAIL("expected a singularity error");
  } catch (const SingularityError& e) {
    CHECK(e.level() == 2);
    CHECK(e.resonator() == 3);
    CHECK(std::string(e.what()).find("transmon 0") != std::string::npos);
  }
}

TEST_CASE("device construction validates its invariants") {
  std::vector<TransmonSpec> t = {{0, 5.0, -0.3, 5.0}, {1, 6.0, -0.3, 6.0}};
  std::vector<ResonatorCoupling> c = {{0, 1, 8.05, 0.2, 0.2}};
  CHECK_NOTHROW(DeviceChain(t, c));
  CHECK_THROWS_AS(DeviceChain(t, {}), ArgumentError);
  CHECK_THROWS_AS(DeviceChain(t, c, 5, 3), ArgumentError);
  CHECK_THROWS_AS(DeviceChain(t, c, 4, 7), ArgumentError);
  auto zero = t;
  zero[1].anharmonicity = 0.0;
  CHECK_THROWS_AS(DeviceChain(zero, c, 4, 3), ArgumentError);
  CHECK_NOTHROW(DeviceChain(zero, c, 2, 2));
  auto negative = t;
  negative[0].bare_frequency = -1.0;
  CHECK_THROWS_AS(DeviceChain(negative, c), ArgumentError);
  std::vector<ResonatorCoupling> skip = {{0, 2, 8.05, 0.2, 0.2}};
  CHECK_THROWS_AS(DeviceChain(t, skip), ArgumentError);
  std::vector<ResonatorCoupling> close = {{0, 1, 6.05, 0.2, 0.2}};
  CHECK_THROWS_AS(DeviceChain(t, close), SingularityError);
}

TEST_CASE("Hamiltonian equals the projected tensor-product oracle") {
  const auto device = fixtures::three_qubit_device();
  const auto basis = device_basis(device);
  const auto idx = oracle::truncated_indices(3, 4, 3);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  std::vector<std::vector<double>> samples = {{5.0, 6.0, 7.0}, {5.61, 6.0, 6.39}};
  for (int i = 0; i < 20; ++i) samples.push_back({5.61 + 0.5 * std::abs(jitter(rng)), 6.0 + jitter(rng),
                                                  6.39 - 0.5 * std::abs(jitter(rng))});
  for (const auto& f : samples) {
    const auto h = build_hamiltonian(device, basis, f).matrix();
    const auto full = oracle::full_hamiltonian(fixtures::oracle_chain(f), fixtures::oracle_resonators(), 4);
    const auto expected = oracle::submatrix(full, idx);
    CHECK((h - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    const auto whole = build_hamiltonian(device, full_basis(device), f).matrix();
    CHECK((whole - full).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("Hamiltonian has exact excitation-block structure") {
  const auto device = fixtures::three_qubit_device();
  for (const auto& basis : {device_basis(device), full_basis(device)}) {
    const auto h = build_hamiltonian(device, basis, std::vector<double>{5.3, 5.9, 6.2}).matrix();
    for (std::size_t a = 0; a < basis.dimension(); ++a)
      for (std::size_t b = 0; b < basis.dimension(); ++b)
        if (basis.excitations()[a] != basis.excitations()[b])
          CHECK(h(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) == Complex(0.0, 0.0));
  }
}

TEST_CASE("selected Hamiltonian entries") {
  const auto device = fixtures::three_qubit_device();
  const auto basis = device_basis(device);
  const std::vector<double> f = {5.0, 6.0, 7.0};
  const auto h = build_hamiltonian(device, basis, f).matrix();
  const auto i111 = static_cast<Eigen::Index>(basis.index_of({1, 1, 1}));
  double diag = 0.0;
  const auto& t = device.transmons();
  for (std::size_t k = 0; k < 3; ++k) {
    const auto sides = device.adjacent_resonators(k);
    diag += dressed_frequency(t[k], 1, f[k], sides);
  }
  CHECK(h(i111, i111).real() == doctest::Approx(kTwoPi * diag).epsilon(1e-14));
  const auto i100 = static_cast<Eigen::Index>(basis.index_of({1, 0, 0}));
  const auto i010 = static_cast<Eigen::Index>(basis.index_of({0, 1, 0}));
  const double j00 = oracle::exchange({5.0, -0.3}, 0, {6.0, -0.3}, 0, {8.05, 0.2, 0.2});
  CHECK(std::abs(h(i100, i010) - Complex(kTwoPi * j00, 0.0)) < 1e-12);
  CHECK(std::abs(h(i010, i100) - Complex(kTwoPi * j00, 0.0)) < 1e-12);
}

TEST_CASE("Hamiltonian rejects mismatched frequency vectors") {
  const auto device = fixtures::three_qubit_device();
  CHECK_THROWS_AS(build_hamiltonian(device, device_basis(device), std::vector<double>{5.0, 6.0}),
                  ArgumentError);
  CHECK_THROWS_AS(build_hamiltonian(device, enumerate_basis(2, 4, 3), std::vector<double>{5.0, 6.0, 7.0}),
                  ArgumentError);
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(HermitianOperator{m}, ArgumentError);
}
