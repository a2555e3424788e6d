// Copyright 2026 The speval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "speval/loudness.h"

#include <cmath>

#include "speval/error.h"

namespace speval {

namespace {

constexpr double kBlockSeconds = 0.4;
constexpr double kHopSeconds = 0.1;  // 75 % overlap
constexpr double kAbsoluteGateLufs = -70.0;
constexpr double kRelativeGateLu = -10.0;
constexpr double kLoudnessOffset = -0.691;

double PowerToLufs(double power) { return kLoudnessOffset + 10.0 * std::log10(power); }

double LufsToPower(double lufs) {
  return std::pow(10.0, (lufs - kLoudnessOffset) / 10.0);
}

void Filter(const Biquad& f, std::vector<double>& x) {
  double z1 = 0.0;
  double z2 = 0.0;
  for (double& v : x) {
    // Transposed direct form II.
    const double y = f.b[0] * v + z1;
    z1 = f.b[1] * v - f.a[0] * y + z2;
    z2 = f.b[2] * v - f.a[1] * y;
    v = y;
  }
}

}  // namespace

std::array<Biquad, 2> KWeightingFilter(int sample_rate) {
  if (sample_rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  const double fs = sample_rate;
  std::array<Biquad, 2> stages;

  // Stage 1: high shelf modelling the acoustic effect of the head.
  {
    constexpr double kGainDb = 3.999843853973347;
    constexpr double kF0 = 1681.974450955533;
    constexpr double kQ = 0.7071752369554196;
    const double k = std::tan(M_PI * kF0 / fs);
    const double vh = std::pow(10.0, kGainDb / 20.0);
    const double vb = std::pow(vh, 0.4996667741545416);
    const double a0 = 1.0 + k / kQ + k * k;
    stages[0].b = {(vh + vb * k / kQ + k * k) / a0, 2.0 * (k * k - vh) / a0,
                   (vh - vb * k / kQ + k * k) / a0};
    stages[0].a = {2.0 * (k * k - 1.0) / a0, (1.0 - k / kQ + k * k) / a0};
  }
  // Stage 2: RLB high-pass.
  {
    constexpr double kF0 = 38.13547087602444;
    constexpr double kQ = 0.5003270373238773;
    const double k = std::tan(M_PI * kF0 / fs);
    const double a0 = 1.0 + k / kQ + k * k;
    stages[1].b = {1.0, -2.0, 1.0};
    stages[1].a = {2.0 * (k * k - 1.0) / a0, (1.0 - k / kQ + k * k) / a0};
  }
  return stages;
}

std::vector<double> KWeight(const Waveform& w) {
  std::vector<double> x(w.samples().begin(), w.samples().end());
  for (const Biquad& stage : KWeightingFilter(w.sample_rate())) Filter(stage, x);
  return x;
}

LoudnessResult MeasureLoudness(const Waveform& w) {
  const auto block = static_cast<std::size_t>(std::lround(kBlockSeconds * w.sample_rate()));
  const auto hop = static_cast<std::size_t>(std::lround(kHopSeconds * w.sample_rate()));
  if (w.size() < block || block == 0) {
    throw Error(ErrorCode::kTooShort, "signal shorter than one 400 ms block");
  }
  const std::vector<double> y = KWeight(w);

  // Prefix sums of squares give each block's mean square in O(1).
  std::vector<double> cumulative(y.size() + 1, 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    cumulative[i + 1] = cumulative[i] + y[i] * y[i];
  }
  const std::size_t n_blocks = (y.size() - block) / hop + 1;
  std::vector<double> powers(n_blocks);
  for (std::size_t j = 0; j < n_blocks; ++j) {
    const std::size_t begin = j * hop;
    powers[j] = (cumulative[begin + block] - cumulative[begin]) / static_cast<double>(block);
  }

  const double absolute_gate = LufsToPower(kAbsoluteGateLufs);
  double sum = 0.0;
  std::size_t count = 0;
  for (double p : powers) {
    if (p > absolute_gate) {
      sum += p;
      ++count;
    }
  }
  if (count == 0) {
    throw Error(ErrorCode::kAllSilent, "no block above the -70 LUFS gate");
  }
  const double relative_gate =
      LufsToPower(PowerToLufs(sum / static_cast<double>(count)) + kRelativeGateLu);
  sum = 0.0;
  count = 0;
  for (double p : powers) {
    if (p > absolute_gate && p > relative_gate) {
      sum += p;
      ++count;
    }
  }
  return {PowerToLufs(sum / static_cast<double>(count)), count};
}

double LoudnessNormalizationGain(const Waveform& w, double target_lufs) {
  return target_lufs - MeasureLoudness(w).integrated_lufs;
}

Waveform NormalizeLoudness(const Waveform& w, double target_lufs) {
  return ApplyGain(w, LoudnessNormalizationGain(w, target_lufs));
}

}  // namespace speval
