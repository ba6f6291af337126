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

#include "ccphase/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "ccphase/parallel.hpp"

namespace ccphase {

double SmoothingParams::effective_sigma() const {
  return sigma > 0.0 ? sigma : t_ramp / (4.0 * std::numbers::sqrt2);
}

SmoothedWaveform::SmoothedWaveform(PulseSchedule schedule, SmoothingParams params)
    : schedule_(std::move(schedule)), t_ramp_(params.t_ramp) {
  if (!(params.t_ramp > 0.0)) throw ArgumentError("t_ramp must be positive");
  if (params.t_ramp > schedule_.segment_duration() + 1e-12)
    throw ArgumentError("t_ramp " + std::to_string(params.t_ramp) + " ns exceeds the segment duration " +
                        std::to_string(schedule_.segment_duration()) + " ns");
  scale_ = 1.0 / (std::numbers::sqrt2 * params.effective_sigma());
}

void SmoothedWaveform::sample(double t, std::span<double> out) const {
  const std::size_t segments = schedule_.segments();
  if (out.size() != schedule_.qubits()) throw ArgumentError("sample buffer has the wrong size");
  if (segments == 0) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = schedule_.search_references()[k];
    return;
  }
  const double seg = schedule_.segment_duration();
  auto i = static_cast<std::size_t>(std::max(0.0, std::floor(t / seg)));
  i = std::min(i, segments - 1);
  const double tau = t - static_cast<double>(i) * seg;
  const bool ramping = i > 0 && tau < t_ramp_;
  const double e = ramping ? std::erf((tau - 0.5 * t_ramp_) * scale_) : 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double now = schedule_.absolute_frequency(k, i);
    if (!ramping) {
      out[k] = now;
      continue;
    }
    const double before = schedule_.absolute_frequency(k, i - 1);
    out[k] = 0.5 * (before + now) + 0.5 * (now - before) * e;
  }
}

DistortionReport distortion_report(const PulseSchedule& schedule, const GateObjective& objective,
                                   const SmoothingParams& params) {
  DistortionReport r;
  r.baseline = objective.evaluate(schedule).fidelity;
  r.smoothed = objective.evaluate(SmoothedWaveform(schedule, params)).fidelity;
  r.delta = r.baseline - r.smoothed;
  return r;
}

void NoiseSweepConfig::validate() const {
  if (amplitudes_mhz.empty()) throw ArgumentError("need at least one noise amplitude");
  for (double a : amplitudes_mhz)
    if (!(a >= 0.0) || !std::isfinite(a)) throw ArgumentError("noise amplitudes must be finite and >= 0");
  if (samples < 1) throw ArgumentError("need at least one sample per amplitude");
}

std::vector<double> NoiseSweepConfig::amplitude_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo) || lo < 0.0) throw ArgumentError("invalid amplitude grid");
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5));
  for (std::size_t i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

RobustnessReport noise_sweep(const PulseSchedule& schedule, const GateObjective& objective,
                             const NoiseSweepConfig& config) {
  config.validate();
  RobustnessReport report;
  report.baseline = objective.evaluate(schedule).fidelity;
  const std::size_t n = config.samples;
  std::vector<double> scores(n);
  std::vector<char> failed(n);

  for (std::size_t a = 0; a < config.amplitudes_mhz.size(); ++a) {
    const double amp_ghz = config.amplitudes_mhz[a] * 1e-3;
    NoisePoint point{config.amplitudes_mhz[a], report.baseline, 0.0, n, 0};
    if (amp_ghz == 0.0) {
      // Zero noise leaves every sample identical to the baseline pulse.
      report.curve.push_back(point);
      continue;
    }
    parallel_for(n, config.threads, [&](std::size_t s) {
      std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                        static_cast<std::uint32_t>(config.seed >> 32),
                        static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(s)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      PulseSchedule noisy = schedule;
      auto& d = noisy.detunings();
      for (Eigen::Index k = 0; k < d.rows(); ++k)
        for (Eigen::Index i = 0; i < d.cols(); ++i) d(k, i) += amp_ghz * unit(rng);
      failed[s] = 0;
      try {
        scores[s] = objective.evaluate(noisy).fidelity;
      } catch (const EvolutionError&) {
        scores[s] = 0.0;
        failed[s] = 1;
      } catch (const DegenerateUnitaryError&) {
        scores[s] = 0.0;
        failed[s] = 1;
      }
    });
    // Accumulate deviations from the baseline in index order.
    double sum = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      sum += scores[s] - report.baseline;
      point.singular += static_cast<std::size_t>(failed[s]);
    }
    point.mean_fidelity = report.baseline + sum / static_cast<double>(n);
    if (n > 1) {
      double ss = 0.0;
      for (double f : scores) ss += (f - point.mean_fidelity) * (f - point.mean_fidelity);
      point.std_error = std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
    }
    report.curve.push_back(point);
  }
  return report;
}

Trend fit_trend(const RobustnessReport& report) {
  const auto n = report.curve.size();
  if (n < 3) throw ArgumentError("need at least three amplitudes for a trend");
  double mx = 0.0;
  double my = 0.0;
  for (const auto& p : report.curve) {
    mx += p.amplitude_mhz;
    my += p.mean_fidelity;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : report.curve) {
    sxx += (p.amplitude_mhz - mx) * (p.amplitude_mhz - mx);
    sxy += (p.amplitude_mhz - mx) * (p.mean_fidelity - my);
  }
  if (!(sxx > 0.0)) throw ArgumentError("amplitudes must not all be equal");
  Trend t;
  t.slope = sxy / sxx;
  double rss = 0.0;
  for (const auto& p : report.curve) {
    const double r = p.mean_fidelity - (my + t.slope * (p.amplitude_mhz - mx));
    rss += r * r;
  }
  t.std_error = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  return t;
}

}  // namespace ccphase
