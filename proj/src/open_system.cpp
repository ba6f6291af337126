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

#include "ccphase/open_system.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "ccphase/parallel.hpp"

namespace ccphase {

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp--) r *= base;
  return r;
}

std::size_t qubits_for_dimension(Eigen::Index d, std::size_t base) {
  std::size_t n = 0;
  std::size_t p = 1;
  while (p < static_cast<std::size_t>(d)) {
    p *= base;
    ++n;
  }
  if (p != static_cast<std::size_t>(d) || n == 0)
    throw ArgumentError("dimension " + std::to_string(d) + " is not a power of " +
                        std::to_string(base));
  return n;
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

void hermitize(ComplexMatrix& m) { m = (0.5 * (m + m.adjoint())).eval(); }

// Full-space indices of the qubit states, binary order, first transmon as MSB.
std::vector<Eigen::Index> computational_indices(std::size_t qubits, int levels) {
  std::vector<Eigen::Index> out(std::size_t{1} << qubits);
  for (std::size_t s = 0; s < out.size(); ++s) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < qubits; ++k)
      idx = idx * static_cast<std::size_t>(levels) + ((s >> (qubits - 1 - k)) & 1U);
    out[s] = static_cast<Eigen::Index>(idx);
  }
  return out;
}

// P|j> = phase(j) |j ^ flip> for a Pauli string.
struct Monomial {
  std::size_t flip = 0;
  std::vector<Complex> phase;
};

Monomial pauli_monomial(std::size_t index, std::size_t qubits) {
  const std::size_t d = std::size_t{1} << qubits;
  Monomial m;
  m.phase.assign(d, Complex(1.0, 0.0));
  for (std::size_t k = 0; k < qubits; ++k) {
    const std::size_t letter = (index / ipow(4, qubits - 1 - k)) % 4;
    const std::size_t bit = std::size_t{1} << (qubits - 1 - k);
    if (letter == 1 || letter == 2) m.flip |= bit;
    for (std::size_t j = 0; j < d; ++j) {
      const bool one = (j & bit) != 0;
      if (letter == 2) m.phase[j] *= one ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
      if (letter == 3 && one) m.phase[j] = -m.phase[j];
    }
  }
  return m;
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0)
    throw ArgumentError("density matrix must be square and non-empty");
  const double asym = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTolerance)
    throw ArgumentError("density matrix is not Hermitian (max deviation " + std::to_string(asym) + ")");
  const double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTolerance)
    throw ArgumentError("density matrix trace is " + std::to_string(tr));
  const double lo = min_eigenvalue();
  if (lo < kEigenvalueFloor)
    throw ArgumentError("density matrix has eigenvalue " + std::to_string(lo));
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw ArgumentError("state vector has zero norm");
  const Eigen::VectorXcd v = psi / norm;
  return DensityMatrix(v * v.adjoint());
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

double DensityMatrix::min_eigenvalue() const {
  ComplexMatrix h = rho_;
  hermitize(h);
  return hermitian_eigenvalues(h).minCoeff();
}

LindbladSpec LindbladSpec::uniform(std::size_t transmons, double t1_us, double t2_us) {
  return {std::vector<double>(transmons, t1_us), std::vector<double>(transmons, t2_us)};
}

void LindbladSpec::validate(std::size_t transmons) const {
  if (t1_us.size() != transmons || t2_us.size() != transmons)
    throw ArgumentError("need T1 and T2 for each of the " + std::to_string(transmons) + " transmons");
  for (std::size_t k = 0; k < transmons; ++k) {
    if (!(t1_us[k] > 0.0) || !(t2_us[k] > 0.0))
      throw ArgumentError("coherence times must be positive");
    if (t2_us[k] > 2.0 * t1_us[k])
      throw ArgumentError("transmon " + std::to_string(k) + ": T2 = " + std::to_string(t2_us[k]) +
                          " us exceeds 2 T1 = " + std::to_string(2.0 * t1_us[k]) + " us");
  }
}

double LindbladSpec::relaxation_rate(std::size_t k) const {
  return std::isinf(t1_us.at(k)) ? 0.0 : 1.0 / (t1_us[k] * 1000.0);
}

double LindbladSpec::dephasing_rate(std::size_t k) const {
  const double inv_t2 = std::isinf(t2_us.at(k)) ? 0.0 : 1.0 / (t2_us[k] * 1000.0);
  return std::max(0.0, inv_t2 - 0.5 * relaxation_rate(k));
}

double LindbladSpec::pure_dephasing_time_us(std::size_t k) const {
  const double rate = dephasing_rate(k);
  return rate == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / (rate * 1000.0);
}

std::size_t full_index(const Occupation& occupation, int levels) {
  std::size_t idx = 0;
  for (int j : occupation) idx = idx * static_cast<std::size_t>(levels) + static_cast<std::size_t>(j);
  return idx;
}

Dissipator::Dissipator(std::size_t transmons, int levels, const LindbladSpec& spec) {
  spec.validate(transmons);
  const auto L = static_cast<std::size_t>(levels);
  const auto d = static_cast<Eigen::Index>(ipow(L, transmons));
  decay_ = Eigen::MatrixXd::Zero(d, d);
  jumps_.resize(transmons);
  for (std::size_t k = 0; k < transmons; ++k) {
    const double g1 = spec.relaxation_rate(k);
    const double g2 = 2.0 * spec.dephasing_rate(k);  // rate of the n-operator channel
    if (g1 == 0.0 && g2 == 0.0) continue;
    trivial_ = false;
    const std::size_t stride = ipow(L, transmons - 1 - k);
    auto level = [&](Eigen::Index a) {
      return static_cast<double>((static_cast<std::size_t>(a) / stride) % L);
    };
    for (Eigen::Index a = 0; a < d; ++a) {
      const double na = level(a);
      if (g1 > 0.0 && na > 0.0)
        jumps_[k].push_back({a, a - static_cast<Eigen::Index>(stride), std::sqrt(g1 * na)});
      for (Eigen::Index b = 0; b < d; ++b) {
        const double nb = level(b);
        decay_(a, b) += 0.5 * g1 * (na + nb) + 0.5 * g2 * (na - nb) * (na - nb);
      }
    }
  }
}

ComplexMatrix Dissipator::apply(const ComplexMatrix& rho) const {
  ComplexMatrix out = -(rho.array() * decay_.array().cast<Complex>()).matrix();
  for (const auto& jumps : jumps_)
    for (const auto& ja : jumps)
      for (const auto& jb : jumps)
        out(ja.to, jb.to) += ja.amplitude * jb.amplitude * rho(ja.from, jb.from);
  return out;
}

void Dissipator::step(ComplexMatrix& rho, double h) const {
  if (trivial_) return;
  const ComplexMatrix d1 = apply(rho);
  const ComplexMatrix d2 = apply(d1);
  rho += h * d1 + (0.5 * h * h) * d2;
}

std::vector<ComplexMatrix> evolve_densities(std::vector<ComplexMatrix> inputs,
                                            const DeviceChain& device, const Waveform& waveform,
                                            const TrotterConfig& trotter,
                                            const std::optional<LindbladSpec>& lindblad,
                                            std::size_t threads) {
  const auto basis = full_basis(device);
  const auto d = static_cast<Eigen::Index>(basis.dimension());
  for (std::size_t i = 0; i < basis.dimension(); ++i)
    if (full_index(basis.state(i), device.levels_per_transmon()) != i)
      throw std::logic_error("full basis is not in base-levels order");
  for (const auto& rho : inputs)
    if (rho.rows() != d || rho.cols() != d)
      throw ArgumentError("input density has dimension " + std::to_string(rho.rows()) +
                          ", full space has " + std::to_string(d));

  if (!lindblad) {
    const auto u = evolve(device, basis, waveform, trotter);
    parallel_for(inputs.size(), threads, [&](std::size_t i) {
      ComplexMatrix tmp = u.matrix() * inputs[i];
      inputs[i].noalias() = tmp * u.matrix().adjoint();
      hermitize(inputs[i]);
    });
    return inputs;
  }

  const Dissipator dissipator(device.size(), device.levels_per_transmon(), *lindblad);
  const double dt = trotter.step;
  std::vector<std::pair<ComplexMatrix, std::size_t>> runs;
  for_each_hamiltonian_run(device, basis, waveform, trotter,
                           [&](const HermitianOperator& h, std::size_t steps, double) {
                             runs.emplace_back(expm_skew(h, dt).matrix(), steps);
                           });

  parallel_for(inputs.size(), threads, [&](std::size_t i) {
    ComplexMatrix& rho = inputs[i];
    ComplexMatrix tmp(d, d);
    for (const auto& [u, steps] : runs) {
      for (std::size_t s = 0; s < steps; ++s) {
        dissipator.step(rho, 0.5 * dt);
        tmp.noalias() = u * rho;
        rho.noalias() = tmp * u.adjoint();
        dissipator.step(rho, 0.5 * dt);
      }
    }
    hermitize(rho);
  });
  return inputs;
}

DensityMatrix evolve_density(const DensityMatrix& rho0, const DeviceChain& device,
                             const Waveform& waveform, const TrotterConfig& trotter,
                             const std::optional<LindbladSpec>& lindblad) {
  auto out = evolve_densities({rho0.matrix()}, device, waveform, trotter, lindblad, 1);
  return DensityMatrix(std::move(out.front()));
}

std::vector<DensityMatrix> prepare_qpt_inputs(std::size_t qubits, int levels) {
  if (qubits == 0) throw ArgumentError("need at least one qubit");
  if (levels < 2) throw ArgumentError("need at least two levels per transmon");
  const double h = std::numbers::sqrt2 / 2.0;
  // Amplitudes of R|0> on {|0>, |1>} for I, Rx(pi/2), Ry(pi/2), Rx(pi).
  const Complex prep[4][2] = {{{1.0, 0.0}, {0.0, 0.0}},
                              {{h, 0.0}, {0.0, -h}},
                              {{h, 0.0}, {h, 0.0}},
                              {{0.0, 0.0}, {0.0, -1.0}}};
  const auto full = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(levels), qubits));
  const auto comp = computational_indices(qubits, levels);
  const std::size_t count = ipow(4, qubits);
  std::vector<DensityMatrix> out;
  out.reserve(count);
  for (std::size_t p = 0; p < count; ++p) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(full);
    for (std::size_t s = 0; s < comp.size(); ++s) {
      Complex amp(1.0, 0.0);
      for (std::size_t k = 0; k < qubits; ++k) {
        const std::size_t choice = (p / ipow(4, qubits - 1 - k)) % 4;
        amp *= prep[choice][(s >> (qubits - 1 - k)) & 1U];
      }
      psi(comp[s]) = amp;
    }
    out.push_back(DensityMatrix(psi * psi.adjoint()));
  }
  return out;
}

ComplexMatrix reduce_to_computational(const ComplexMatrix& rho, std::size_t qubits, int levels) {
  const auto idx = computational_indices(qubits, levels);
  const auto full = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(levels), qubits));
  if (rho.rows() != full || rho.cols() != full)
    throw ArgumentError("operator dimension does not match the full space");
  const auto d = static_cast<Eigen::Index>(idx.size());
  ComplexMatrix out(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) out(a, b) = rho(idx[a], idx[b]);
  return out;
}

ComplexMatrix pauli_operator(std::size_t index, std::size_t qubits) {
  if (index >= ipow(4, qubits)) throw ArgumentError("Pauli index out of range");
  const auto m = pauli_monomial(index, qubits);
  const auto d = static_cast<Eigen::Index>(m.phase.size());
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  for (std::size_t j = 0; j < m.phase.size(); ++j)
    p(static_cast<Eigen::Index>(j ^ m.flip), static_cast<Eigen::Index>(j)) = m.phase[j];
  return p;
}

ProcessMatrix::ProcessMatrix(ComplexMatrix chi) : chi_(std::move(chi)) {
  if (chi_.rows() != chi_.cols()) throw ArgumentError("process matrix must be square");
  qubits_ = qubits_for_dimension(chi_.rows(), 4);
  const double asym = (chi_ - chi_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) throw ArgumentError("process matrix is not Hermitian");
  const double tr = chi_.trace().real();
  if (std::abs(tr - 1.0) > 1e-6) throw ArgumentError("process matrix trace is " + std::to_string(tr));
  ComplexMatrix h = chi_;
  hermitize(h);
  if (hermitian_eigenvalues(h).minCoeff() < -1e-8)
    throw ArgumentError("process matrix is not positive semidefinite");
}

ProcessMatrix estimate_chi(const std::vector<ComplexMatrix>& inputs,
                           const std::vector<ComplexMatrix>& outputs) {
  if (inputs.empty() || inputs.size() != outputs.size())
    throw ArgumentError("need matched, non-empty input and output sets");
  const Eigen::Index d = inputs.front().rows();
  const std::size_t qubits = qubits_for_dimension(d, 2);
  const Eigen::Index d2 = d * d;
  if (static_cast<Eigen::Index>(inputs.size()) != d2)
    throw EstimationError("need " + std::to_string(d2) + " input/output pairs, got " +
                          std::to_string(inputs.size()));

  ComplexMatrix in(d2, d2);
  ComplexMatrix out(d2, d2);
  for (Eigen::Index i = 0; i < d2; ++i) {
    const auto& a = inputs[static_cast<std::size_t>(i)];
    const auto& b = outputs[static_cast<std::size_t>(i)];
    if (a.rows() != d || a.cols() != d || b.rows() != d || b.cols() != d)
      throw ArgumentError("all inputs and outputs must be " + std::to_string(d) + " x " +
                          std::to_string(d));
    in.col(i) = Eigen::Map<const Eigen::VectorXcd>(a.data(), d2);
    out.col(i) = Eigen::Map<const Eigen::VectorXcd>(b.data(), d2);
  }
  Eigen::FullPivLU<ComplexMatrix> lu(in);
  if (lu.rank() < d2)
    throw EstimationError("input states span rank " + std::to_string(lu.rank()) + " < " +
                          std::to_string(d2));
  const ComplexMatrix s = out * lu.inverse();  // vec(out) = S vec(in), column-major vec

  std::vector<Monomial> paulis;
  paulis.reserve(static_cast<std::size_t>(d2));
  for (Eigen::Index m = 0; m < d2; ++m) paulis.push_back(pauli_monomial(static_cast<std::size_t>(m), qubits));

  // S = sum_mn chi_mn conj(P_n) (x) P_m, and these d^2 operators are orthogonal
  // with norm d^2 under the trace inner product.
  ComplexMatrix chi(d2, d2);
  const auto ud = static_cast<std::size_t>(d);
  for (Eigen::Index m = 0; m < d2; ++m) {
    const auto& pm = paulis[static_cast<std::size_t>(m)];
    for (Eigen::Index n = 0; n < d2; ++n) {
      const auto& pn = paulis[static_cast<std::size_t>(n)];
      Complex acc(0.0, 0.0);
      for (std::size_t j1 = 0; j1 < ud; ++j1) {
        const auto row1 = static_cast<Eigen::Index>((j1 ^ pn.flip) * ud);
        const auto col1 = static_cast<Eigen::Index>(j1 * ud);
        for (std::size_t j2 = 0; j2 < ud; ++j2)
          acc += pn.phase[j1] * std::conj(pm.phase[j2]) *
                 s(row1 + static_cast<Eigen::Index>(j2 ^ pm.flip), col1 + static_cast<Eigen::Index>(j2));
      }
      chi(m, n) = acc / static_cast<double>(d2);
    }
  }

  hermitize(chi);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(chi);
  Eigen::VectorXd w = eig.eigenvalues().cwiseMax(0.0);
  const double total = w.sum();
  if (!(total > 0.0)) throw EstimationError("reconstructed process matrix has no positive part");
  w /= total;
  ComplexMatrix projected = eig.eigenvectors() * w.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  hermitize(projected);
  return ProcessMatrix(std::move(projected));
}

ProcessMatrix ideal_chi(const ComplexMatrix& unitary) {
  const std::size_t qubits = qubits_for_dimension(unitary.rows(), 2);
  const auto d2 = static_cast<Eigen::Index>(ipow(4, qubits));
  Eigen::VectorXcd u(d2);
  for (Eigen::Index m = 0; m < d2; ++m)
    u(m) = (pauli_operator(static_cast<std::size_t>(m), qubits).adjoint() * unitary).trace() /
           static_cast<double>(unitary.rows());
  ComplexMatrix chi = u * u.adjoint();
  hermitize(chi);
  return ProcessMatrix(std::move(chi));
}

QPTReport qpt_metrics(const ProcessMatrix& chi, const ProcessMatrix& ideal) {
  if (chi.matrix().rows() != ideal.matrix().rows())
    throw ArgumentError("process matrices have different dimensions");
  const double d = static_cast<double>(std::size_t{1} << chi.qubits());
  QPTReport r;
  r.process_fidelity = (ideal.matrix() * chi.matrix()).trace().real();
  r.average_gate_fidelity = (d * r.process_fidelity + 1.0) / (d + 1.0);
  r.average_purity = (d * (chi.matrix() * chi.matrix()).trace().real() + 1.0) / (d + 1.0);
  return r;
}

QPTResult run_qpt(const DeviceChain& device, const Waveform& waveform, const ComplexMatrix& target,
                  const QPTOptions& options) {
  const std::size_t n = device.size();
  const int levels = device.levels_per_transmon();
  if (target.rows() != static_cast<Eigen::Index>(std::size_t{1} << n))
    throw ArgumentError("target dimension does not match the device");

  QPTResult result;
  const auto basis = device_basis(device);
  const auto u = evolve(device, basis, waveform, options.trotter);
  result.closed = fidelity_report(ComputationalProjection(basis).apply(u.matrix()), target);

  const auto comp = computational_indices(n, levels);
  const auto inputs = prepare_qpt_inputs(n, levels);
  std::vector<ComplexMatrix> prepared;
  prepared.reserve(inputs.size());
  const ComplexMatrix m = options.compensate ? compensation_matrix(result.closed.phases)
                                             : ComplexMatrix::Identity(target.rows(), target.cols());
  for (const auto& rho : inputs) {
    ComplexMatrix r = rho.matrix();
    for (std::size_t a = 0; a < comp.size(); ++a)
      for (std::size_t b = 0; b < comp.size(); ++b)
        r(comp[a], comp[b]) *= m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) *
                               std::conj(m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)));
    prepared.push_back(std::move(r));
  }

  const auto outputs =
      evolve_densities(std::move(prepared), device, waveform, options.trotter, options.lindblad,
                       options.threads);

  std::vector<ComplexMatrix> in_small;
  std::vector<ComplexMatrix> out_small;
  double trace_sum = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    in_small.push_back(reduce_to_computational(inputs[i].matrix(), n, levels));
    out_small.push_back(reduce_to_computational(outputs[i], n, levels));
    trace_sum += out_small.back().trace().real();
  }
  result.mean_leakage = 1.0 - trace_sum / static_cast<double>(inputs.size());
  result.chi = estimate_chi(in_small, out_small);
  result.ideal = ideal_chi(target);
  result.report = qpt_metrics(result.chi, result.ideal);
  return result;
}

}  // namespace ccphase
