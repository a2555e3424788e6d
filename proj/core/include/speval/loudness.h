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

#ifndef SPEVAL_LOUDNESS_H_
#define SPEVAL_LOUDNESS_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "speval/audio_io.h"

namespace speval {

// Integrated loudness measurement per ITU-R BS.1770 for a single channel
// (channel weight 1.0).
struct LoudnessResult {
  double integrated_lufs = 0.0;
  std::size_t gated_block_count = 0;
};

// Second-order section in direct form, a0 normalised to 1.
struct Biquad {
  std::array<double, 3> b{};
  std::array<double, 2> a{};
};

// K-weighting pre-filter (high shelf) and RLB high-pass for `sample_rate`,
// redesigned from the analog prototype through the bilinear transform.
std::array<Biquad, 2> KWeightingFilter(int sample_rate);

// Applies the two K-weighting stages to `w` (zero initial state).
std::vector<double> KWeight(const Waveform& w);

// Throws kTooShort when `w` is shorter than one 400 ms block and kAllSilent
// when no block survives the -70 LUFS absolute gate.
LoudnessResult MeasureLoudness(const Waveform& w);

// Gain (dB) that brings `w` to `target_lufs`.
double LoudnessNormalizationGain(const Waveform& w, double target_lufs);

Waveform NormalizeLoudness(const Waveform& w, double target_lufs);

inline constexpr double kDefaultTargetLufs = -30.0;

}  // namespace speval

#endif  // SPEVAL_LOUDNESS_H_
