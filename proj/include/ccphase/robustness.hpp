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

// Stress tests for learned pulses: first-order control-line distortion
// modelled as an error-function ramp at every segment boundary, and additive
// uniform noise on the detuning sequence.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ccphase/propagator.hpp"
#include "ccphase/pulse_optimizer.hpp"

namespace ccphase {

struct SmoothingParams {
  double t_ramp = 1.0;  // ns
  double sigma = 0.0;   // ns; 0 selects t_ramp / (4 sqrt 2)

  double effective_sigma() const;
};

// Holds each segment value, except during the first t_ramp of every segment
// after the first, where it follows an erf ramp from the previous value.
class SmoothedWaveform final : public Waveform {
 public:
  SmoothedWaveform(PulseSchedule schedule, SmoothingParams params = {});

  std::size_t qubits() const override { return schedule_.qubits(); }
  double duration() const override { return schedule_.duration(); }
  void sample(double t, std::span<double> out) const override;

 private:
  PulseSchedule schedule_;
  double t_ramp_;
  double scale_;  // 1 / (sqrt 2 sigma)
};

struct DistortionReport {
  double baseline = 0.0;
  double smoothed = 0.0;
  double delta = 0.0;  // baseline - smoothed
};

DistortionReport distortion_report(const PulseSchedule& schedule, const GateObjective& objective,
                                   const SmoothingParams& params = {});

struct NoiseSweepConfig {
  std::vector<double> amplitudes_mhz;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  std::size_t threads = 0;

  void validate() const;
  // lo:hi:step inclusive of hi within half a step.
  static std::vector<double> amplitude_grid(double lo, double hi, double step);
};

struct NoisePoint {
  double amplitude_mhz = 0.0;
  double mean_fidelity = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::size_t singular = 0;  // evolutions that failed and scored 0
};

struct RobustnessReport {
  double baseline = 0.0;
  std::vector<NoisePoint> curve;
};

// Noise for (amplitude index a, sample s) comes from a generator keyed by
// (seed, a, s), so results do not depend on thread count or order.
RobustnessReport noise_sweep(const PulseSchedule& schedule, const GateObjective& objective,
                             const NoiseSweepConfig& config);

struct Trend {
  double slope = 0.0;      // fidelity per MHz
  double std_error = 0.0;  // from the residuals
};

// Ordinary least squares of mean fidelity against amplitude.
Trend fit_trend(const RobustnessReport& report);

}  // namespace ccphase
