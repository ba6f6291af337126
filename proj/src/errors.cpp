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

#include "ccphase/errors.hpp"

#include <sstream>

namespace ccphase {

namespace {

std::string singularity_message(std::size_t transmon, int level, std::size_t resonator,
                                double detuning) {
  std::ostringstream os;
  os << "dispersive pole: transmon " << transmon << ", level " << level << ", resonator "
     << resonator << " (denominator " << detuning << " GHz)";
  return os.str();
}

std::string evolution_message(double time_ns, std::size_t qubit, const std::string& what) {
  std::ostringstream os;
  os << "evolution failed at t = " << time_ns << " ns on qubit " << qubit << ": " << what;
  return os.str();
}

}  // namespace

SingularityError::SingularityError(std::size_t transmon, int level, std::size_t resonator,
                                   double detuning)
    : std::domain_error(singularity_message(transmon, level, resonator, detuning)),
      transmon_(transmon),
      level_(level),
      resonator_(resonator),
      detuning_(detuning) {}

EvolutionError::EvolutionError(double time_ns, std::size_t qubit, const std::string& what)
    : std::runtime_error(evolution_message(time_ns, qubit, what)), time_(time_ns), qubit_(qubit) {}

}  // namespace ccphase
