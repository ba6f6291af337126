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

#include <cmath>
#include <limits>
#include <random>

#include "ccphase/open_system.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ccphase;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DeviceChain single_transmon() {
  return DeviceChain({{0, 5.0, -0.3, 5.0}}, {}, 4, 3);
}

DeviceChain two_transmons(int levels) {
  return DeviceChain({{0, 5.0, -0.3, 5.0}, {1, 5.6, -0.3, 5.6}}, {{0, 1, 7.0, 0.3, 0.3}}, levels,
                     2 * (levels - 1));
}

// Lindblad dissipator sum_L (L rho L^dag - {L^dag L, rho}/2) from tensor products.
ComplexMatrix oracle_dissipator(const ComplexMatrix& rho, int n, int levels, const std::vector<double>& g1,
                                const std::vector<double>& gphi) {
  ComplexMatrix a = ComplexMatrix::Zero(levels, levels);
  ComplexMatrix num = ComplexMatrix::Zero(levels, levels);
  for (int j = 0; j + 1 < levels; ++j) a(j, j + 1) = std::sqrt(j + 1.0);
  for (int j = 0; j < levels; ++j) num(j, j) = j;
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  auto add = [&](const ComplexMatrix& l) {
    const ComplexMatrix ll = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ll * rho + rho * ll);
  };
  for (int k = 0; k < n; ++k) {
    add(std::sqrt(g1[k]) * oracle::embed(a, k, n, levels));
    add(std::sqrt(2.0 * gphi[k]) * oracle::embed(num, k, n, levels));
  }
  return out;
}

ComplexMatrix random_density(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(n(rng), n(rng));
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace

TEST_CASE("density matrices validate their invariants") {
  CHECK_NOTHROW(DensityMatrix(ComplexMatrix::Identity(4, 4) / 4.0));
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::Identity(4, 4)), ArgumentError);
  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, ArgumentError);
  ComplexMatrix skew = ComplexMatrix::Identity(2, 2) / 2.0;
  skew(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix{skew}, ArgumentError);
}

TEST_CASE("coherence times derive the pure dephasing time") {
  const auto spec = LindbladSpec::uniform(3, 20.0, 20.0);
  CHECK(spec.pure_dephasing_time_us(0) == doctest::Approx(40.0));
  CHECK(spec.relaxation_rate(1) == doctest::Approx(1.0 / 20000.0));
  CHECK_THROWS_AS(LindbladSpec::uniform(3, 20.0, 41.0).validate(3), ArgumentError);
  CHECK_THROWS_AS(LindbladSpec::uniform(3, 20.0, 20.0).validate(2), ArgumentError);
  CHECK_NOTHROW(LindbladSpec::uniform(3, kInf, kInf).validate(3));
  CHECK(LindbladSpec::uniform(1, kInf, kInf).dephasing_rate(0) == 0.0);
  CHECK_THROWS_AS(LindbladSpec::uniform(1, 20.0, kInf).validate(1), ArgumentError);
}

TEST_CASE("dissipator matches the tensor-product Lindblad oracle") {
  std::mt19937_64 rng(12);
  for (int levels : {2, 3, 4}) {
    LindbladSpec spec{{12.0, 30.0}, {9.0, 50.0}};
    const Dissipator d(2, levels, spec);
    const auto rho = random_density(levels * levels, rng);
    const std::vector<double> g1 = {spec.relaxation_rate(0), spec.relaxation_rate(1)};
    const std::vector<double> gphi = {spec.dephasing_rate(0), spec.dephasing_rate(1)};
    const auto expected = oracle_dissipator(rho, 2, levels, g1, gphi);
    CHECK((d.apply(rho) - expected).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(std::abs(d.apply(rho).trace()) < 1e-18);
  }
}

TEST_CASE("closed evolution keeps pure states pure") {
  const auto device = fixtures::three_qubit_device();
  const auto inputs = prepare_qpt_inputs(3, 4);
  const auto s = fixtures::random_schedules(1, 77).front();
  const PiecewiseConstantWaveform w(s);
  for (std::size_t i : {0UL, 21UL, 63UL}) {
    const auto out = evolve_density(inputs[i], device, w);
    CHECK(out.purity() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(out.matrix().trace().real() - 1.0) < 1e-8);
  }
}

TEST_CASE("relaxation of |1> over T1 leaves e^-1 of the population") {
  const auto device = single_transmon();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(1) = 1.0;
  const ConstantWaveform idle({5.0}, 20000.0);
  const auto out = evolve_density(DensityMatrix::pure(psi), device, idle, {}, LindbladSpec::uniform(1, 20.0, 40.0));
  CHECK(out.matrix()(1, 1).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-3));
  CHECK(out.matrix()(0, 0).real() == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-3));
}

TEST_CASE("dephasing of |+> decays the coherence at 1/T2") {
  const auto device = single_transmon();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = psi(1) = std::sqrt(0.5);
  const ConstantWaveform idle({5.0}, 5000.0);
  const auto out = evolve_density(DensityMatrix::pure(psi), device, idle, {}, LindbladSpec::uniform(1, 20.0, 20.0));
  CHECK(std::abs(out.matrix()(0, 1)) == doctest::Approx(0.5 * std::exp(-5.0 / 20.0)).epsilon(1e-4));
}

TEST_CASE("open evolution preserves trace and positivity and lowers purity monotonically") {
  const auto device = two_transmons(4);
  std::mt19937_64 rng(2);
  // Pure dephasing is unital, so purity cannot rise. Short times make the effect visible.
  const auto spec = LindbladSpec::uniform(2, kInf, 0.06);
  ComplexMatrix diag = ComplexMatrix::Zero(16, 16);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Eigen::Index i = 0; i < 16; ++i) diag(i, i) = u(rng);
  diag /= diag.trace().real();
  const auto rho0 = DensityMatrix(diag);
  double last = rho0.purity();
  for (double t : {5.0, 10.0, 20.0, 40.0}) {
    const auto out = evolve_density(rho0, device, ConstantWaveform({5.0, 5.6}, t), {}, spec);
    CHECK(std::abs(out.matrix().trace().real() - 1.0) < 1e-8);
    CHECK(out.min_eigenvalue() > -1e-7);
    CHECK(out.purity() <= last + 1e-12);
    last = out.purity();
  }
  const auto mixed = evolve_density(DensityMatrix(random_density(16, rng)), device,
                                    ConstantWaveform({5.2, 5.5}, 10.0), {}, LindbladSpec::uniform(2, 0.05, 0.06));
  CHECK(mixed.min_eigenvalue() > -1e-7);
  CHECK(std::abs(mixed.matrix().trace().real() - 1.0) < 1e-8);
}

TEST_CASE("tomography inputs") {
  const auto inputs = prepare_qpt_inputs(3, 4);
  REQUIRE(inputs.size() == 64);
  CHECK(inputs[0].matrix()(0, 0).real() == doctest::Approx(1.0));
  // Rx(pi) on R alone: |001>, full-space index 1.
  CHECK(inputs[3].matrix()(1, 1).real() == doctest::Approx(1.0));
  // Rx(pi) on L alone: |100>, full-space index 16.
  CHECK(inputs[48].matrix()(16, 16).real() == doctest::Approx(1.0));
  for (const auto& rho : inputs) {
    CHECK(rho.purity() == doctest::Approx(1.0));
    CHECK(std::abs(reduce_to_computational(rho.matrix(), 3, 4).trace().real() - 1.0) < 1e-14);
  }
  CHECK(prepare_qpt_inputs(2, 3).size() == 16);
}

TEST_CASE("Pauli operators are unitary, Hermitian and orthogonal") {
  for (std::size_t m = 0; m < 16; ++m) {
    const auto p = pauli_operator(m, 2);
    CHECK((p * p - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    for (std::size_t n = 0; n < 16; ++n)
      CHECK(std::abs((p.adjoint() * pauli_operator(n, 2)).trace() - Complex(m == n ? 4.0 : 0.0, 0.0)) < 1e-14);
  }
  ComplexMatrix y(2, 2);
  y << 0.0, Complex(0, -1), Complex(0, 1), 0.0;
  ComplexMatrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  CHECK((pauli_operator(2, 1) - y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((pauli_operator(1 * 4 + 2, 2) - oracle::kron(x, y)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("identity channel reconstructs a single II entry") {
  std::vector<ComplexMatrix> in;
  for (const auto& rho : prepare_qpt_inputs(3, 4)) in.push_back(reduce_to_computational(rho.matrix(), 3, 4));
  const auto chi = estimate_chi(in, in);
  CHECK(std::abs(chi(0, 0) - Complex(1.0, 0.0)) < 1e-8);
  ComplexMatrix rest = chi.matrix();
  rest(0, 0) = 0.0;
  CHECK(rest.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("unitary channels round trip through tomography") {
  std::mt19937_64 rng(31);
  std::vector<ComplexMatrix> in;
  for (const auto& rho : prepare_qpt_inputs(3, 4)) in.push_back(reduce_to_computational(rho.matrix(), 3, 4));
  for (int trial = 0; trial < 3; ++trial) {
    const ComplexMatrix u = trial == 0 ? ccphase_ideal() : oracle::random_unitary(8, rng);
    std::vector<ComplexMatrix> out;
    for (const auto& rho : in) out.push_back(u * rho * u.adjoint());
    const auto chi = estimate_chi(in, out);
    const auto ideal = ideal_chi(u);
    CHECK((chi.matrix() - ideal.matrix()).cwiseAbs().maxCoeff() < 1e-8);
    const auto r = qpt_metrics(chi, ideal);
    CHECK(r.process_fidelity == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.average_purity == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("reconstruction recovers a depolarizing channel") {
  // E(rho) = (1 - p) rho + p I/d has chi_00 = 1 - p + p/d^2 and chi_mm = p/d^2 otherwise.
  const double p = 0.2;
  std::vector<ComplexMatrix> in;
  std::vector<ComplexMatrix> out;
  for (const auto& rho : prepare_qpt_inputs(2, 2)) {
    in.push_back(reduce_to_computational(rho.matrix(), 2, 2));
    out.push_back((1 - p) * in.back() + p * ComplexMatrix::Identity(4, 4) / 4.0);
  }
  const auto chi = estimate_chi(in, out);
  CHECK(chi(0, 0).real() == doctest::Approx(1 - p + p / 16).epsilon(1e-12));
  CHECK(chi(5, 5).real() == doctest::Approx(p / 16).epsilon(1e-12));
}

TEST_CASE("rank-deficient inputs are rejected") {
  std::vector<ComplexMatrix> in(16, ComplexMatrix::Identity(4, 4) / 4.0);
  CHECK_THROWS_AS(estimate_chi(in, in), EstimationError);
  std::vector<ComplexMatrix> few(3, ComplexMatrix::Identity(4, 4) / 4.0);
  CHECK_THROWS_AS(estimate_chi(few, few), EstimationError);
}

TEST_CASE("metric arithmetic") {
  const auto id = ideal_chi(ComplexMatrix::Identity(8, 8));
  auto r = qpt_metrics(id, id);
  CHECK(r.process_fidelity == doctest::Approx(1.0));
  CHECK(r.average_gate_fidelity == doctest::Approx(1.0));
  CHECK(r.average_purity == doctest::Approx(1.0));
  r = qpt_metrics(ideal_chi(pauli_operator(1, 3)), id);
  CHECK(r.process_fidelity == doctest::Approx(0.0));
  CHECK(r.average_gate_fidelity == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK((8 * 0.995 + 1) / 9 == doctest::Approx(0.99556).epsilon(1e-5));
}

TEST_CASE("closed-system tomography agrees with the gate fidelity") {
  const auto device = fixtures::three_qubit_device();
  const ConstantWaveform idle(device.idle_frequencies(), 50.0);
  const auto r = run_qpt(device, idle, ComplexMatrix::Identity(8, 8));
  CHECK(r.report.average_gate_fidelity == doctest::Approx(r.closed.fidelity).epsilon(2e-3));
  CHECK(r.report.average_gate_fidelity == (8 * r.report.process_fidelity + 1) / 9);
  CHECK(r.mean_leakage < 2e-3);
}

TEST_CASE("tomography with decoherence yields a valid process matrix") {
  const auto device = fixtures::three_qubit_device();
  const ConstantWaveform idle(device.idle_frequencies(), 50.0);
  QPTOptions opts;
  opts.lindblad = LindbladSpec::uniform(3, 20.0, 20.0);
  const auto r = run_qpt(device, idle, ComplexMatrix::Identity(8, 8), opts);
  const auto& chi = r.chi.matrix();
  CHECK(std::abs(chi.trace().real() - 1.0) < 1e-6);
  CHECK((chi - chi.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(Eigen::SelfAdjointEigenSolver<ComplexMatrix>(chi).eigenvalues().minCoeff() > -1e-8);
  const auto closed = run_qpt(device, idle, ComplexMatrix::Identity(8, 8));
  CHECK(r.report.process_fidelity < closed.report.process_fidelity);
  CHECK(r.report.average_purity < closed.report.average_purity);
}
