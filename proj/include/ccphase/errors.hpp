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
#include <stdexcept>
#include <string>
#include <utility>

namespace ccphase {

// Invalid arguments, bounds or dimensions.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A dispersive denominator of the effective Hamiltonian came within the
// configured floor of zero.
class SingularityError : public std::domain_error {
 public:
  SingularityError(std::size_t transmon, int level, std::size_t resonator, double detuning);

  std::size_t transmon() const noexcept { return transmon_; }
  int level() const noexcept { return level_; }
  std::size_t resonator() const noexcept { return resonator_; }
  double detuning() const noexcept { return detuning_; }

 private:
  std::size_t transmon_;
  int level_;
  std::size_t resonator_;
  double detuning_;
};

// Time evolution failed at a given instant (wraps a SingularityError).
class EvolutionError : public std::runtime_error {
 public:
  EvolutionError(double time_ns, std::size_t qubit, const std::string& what);

  double time() const noexcept { return time_; }
  std::size_t qubit() const noexcept { return qubit_; }

 private:
  double time_;
  std::size_t qubit_;
};

// Phase compensation is undefined because a reference diagonal entry vanished.
class DegenerateUnitaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Population seeding could not produce a constraint-satisfying chromosome.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The fitness function produced a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, std::string chromosome)
      : std::runtime_error(what), chromosome_(std::move(chromosome)) {}
  const std::string& chromosome() const noexcept { return chromosome_; }

 private:
  std::string chromosome_;
};

// Process tomography inputs do not span the operator space.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File or document level problems; message carries path and line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ccphase
