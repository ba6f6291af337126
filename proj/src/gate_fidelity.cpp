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

#include "ccphase/gate_fidelity.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ccphase {

ComputationalProjection::ComputationalProjection(const TruncatedBasis& basis)
    : qubits_(basis.transmons()) {
  const std::size_t dim = std::size_t{1} << qubits_;
  indices_.reserve(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    Occupation occ(qubits_);
    for (std::size_t k = 0; k < qubits_; ++k) occ[k] = static_cast<int>((s >> (qubits_ - 1 - k)) & 1U);
    const auto idx = basis.index_of(occ);
    if (idx == TruncatedBasis::npos)
      throw ArgumentError("computational state " + std::to_string(s) + " is not in the basis");
    indices_.push_back(idx);
  }
}

ComplexMatrix ComputationalProjection::apply(const ComplexMatrix& u) const {
  const auto d = static_cast<Eigen::Index>(indices_.size());
  ComplexMatrix p(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c)
      p(r, c) = u(static_cast<Eigen::Index>(indices_[r]), static_cast<Eigen::Index>(indices_[c]));
  return p;
}

double wrap_phase(double phi) {
  constexpr double pi = std::numbers::pi;
  double r = std::remainder(phi, 2.0 * pi);  // [-pi, pi]
  if (r <= -pi) r += 2.0 * pi;
  return r;
}

double CompensationPhases::theta(std::size_t weight) const {
  for (std::size_t b = 0; b < bit_phase.size(); ++b)
    if ((std::size_t{1} << b) == weight) return bit_phase[b];
  throw ArgumentError("no compensation phase for weight " + std::to_string(weight));
}

double CompensationPhases::state_phase(std::size_t s) const {
  double phi = 0.0;
  for (std::size_t b = 0; b < bit_phase.size(); ++b)
    if ((s >> b) & 1U) phi += bit_phase[b];
  return phi;
}

CompensationPhases CompensationPhases::reduced() const {
  CompensationPhases out{wrap_phase(global), bit_phase};
  for (auto& p : out.bit_phase) p = wrap_phase(p);
  return out;
}

ComplexMatrix controlled_phase_ideal(std::size_t qubits) {
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << qubits);
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  u(d - 1, d - 1) = -1.0;
  return u;
}

ComplexMatrix ccphase_ideal() { return controlled_phase_ideal(3); }

ComplexMatrix project_to_computational(const Unitary& u, const TruncatedBasis& basis) {
  if (u.dimension() != static_cast<Eigen::Index>(basis.dimension()))
    throw ArgumentError("unitary dimension does not match the basis");
  return ComputationalProjection(basis).apply(u.matrix());
}

ComplexMatrix compensation_matrix(const CompensationPhases& phases) {
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << phases.bit_phase.size());
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (Eigen::Index s = 0; s < d; ++s)
    m(s, s) = std::polar(1.0, -(phases.global + phases.state_phase(static_cast<std::size_t>(s))));
  return m;
}

namespace {

std::size_t qubits_of(const ComplexMatrix& u) {
  const auto d = static_cast<std::size_t>(u.rows());
  if (u.rows() != u.cols() || d == 0 || (d & (d - 1)) != 0)
    throw ArgumentError("expected a square 2^n x 2^n matrix");
  std::size_t n = 0;
  while ((std::size_t{1} << n) < d) ++n;
  return n;
}

}  // namespace

CompensationPhases fit_phases(const ComplexMatrix& u) {
  const auto n = qubits_of(u);
  auto checked_arg = [&](std::size_t s) {
    const Complex z = u(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
    if (std::abs(z) == 0.0)
      throw DegenerateUnitaryError("diagonal entry " + std::to_string(s) +
                                   " vanishes; its phase is undefined");
    return std::arg(z);
  };
  CompensationPhases p;
  p.global = checked_arg(0);
  for (std::size_t b = 0; b < n; ++b) p.bit_phase.push_back(checked_arg(std::size_t{1} << b) - p.global);
  return p.reduced();
}

CompensationPhases fit_phases(const ComplexMatrix& u, const ComplexMatrix& target,
                              const PhaseFitOptions& options) {
  auto phases = fit_phases(u);
  if (!options.refine) return phases;
  const auto n = phases.bit_phase.size();
  if (target.rows() != u.rows() || target.cols() != u.cols())
    throw ArgumentError("target and unitary dimensions differ");

  // Only Tr(T^dag U M) depends on the phases: sum_s c_s e^{-i phase(s)}.
  const auto d = static_cast<std::size_t>(u.rows());
  const Eigen::VectorXcd c = (target.adjoint() * u).diagonal();

  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    double largest_move = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      Complex with_bit = 0.0, without_bit = 0.0;
      const double own = phases.bit_phase[b];
      for (std::size_t s = 0; s < d; ++s) {
        const bool set = (s >> b) & 1U;
        const double others = phases.state_phase(s) - (set ? own : 0.0);
        const Complex term = c(static_cast<Eigen::Index>(s)) * std::polar(1.0, -others);
        (set ? with_bit : without_bit) += term;
      }
      if (std::abs(with_bit) == 0.0 || std::abs(without_bit) == 0.0) continue;
      const double best = wrap_phase(std::arg(with_bit) - std::arg(without_bit));
      largest_move = std::max(largest_move, std::abs(wrap_phase(best - own)));
      phases.bit_phase[b] = best;
    }
    if (largest_move < options.tolerance) break;
  }

  Complex trace = 0.0;
  for (std::size_t s = 0; s < d; ++s)
    trace += c(static_cast<Eigen::Index>(s)) * std::polar(1.0, -phases.state_phase(s));
  if (std::abs(trace) > 0.0) phases.global = std::arg(trace);
  return phases.reduced();
}

double gate_fidelity(const ComplexMatrix& u, const ComplexMatrix& target,
                     const CompensationPhases& phases) {
  if (target.rows() != u.rows() || target.cols() != u.cols())
    throw ArgumentError("target and unitary dimensions differ");
  const ComplexMatrix uf = u * compensation_matrix(phases);
  const double d = static_cast<double>(u.rows());
  const double norm = (uf.adjoint() * uf).trace().real();
  const double overlap = std::norm((target.adjoint() * uf).trace());
  return (norm + overlap) / (d * (d + 1.0));
}

double gate_fidelity(const ComplexMatrix& u, const ComplexMatrix& target,
                     const PhaseFitOptions& options) {
  return gate_fidelity(u, target, fit_phases(u, target, options));
}

FidelityReport fidelity_report(const ComplexMatrix& u, const ComplexMatrix& target,
                               const PhaseFitOptions& options) {
  FidelityReport r;
  r.phases = fit_phases(u, target, options);
  r.fidelity = gate_fidelity(u, target, r.phases);
  r.compensated = u * compensation_matrix(r.phases);
  return r;
}

nlohmann::json report_to_json(const FidelityReport& report) {
  nlohmann::json j = {{"schema_version", 1}, {"fidelity", report.fidelity},
                      {"theta0", report.phases.global}};
  for (std::size_t b = 0; b < report.phases.bit_phase.size(); ++b)
    j["theta" + std::to_string(std::size_t{1} << b)] = report.phases.bit_phase[b];
  return j;
}

}  // namespace ccphase
