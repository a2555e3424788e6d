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

#ifndef SPEVAL_RT60_H_
#define SPEVAL_RT60_H_

#include <span>
#include <vector>

#include "speval/audio_io.h"

namespace speval {

struct Rt60Estimate {
  double rt60_s = 0.0;
  double fit_slope_db_per_s = 0.0;
  double fit_upper_db = -5.0;
  double fit_lower_db = -25.0;
  double r_squared = 0.0;
};

struct Rt60Summary {
  double mean_s = 0.0;
  double sd_s = 0.0;
};

inline constexpr double kEdcFloorDb = -120.0;

// Schroeder backward-integrated energy decay curve in dB, normalised so the
// first value is 0 dB and floored at -120 dB. Throws kZeroSignal.
std::vector<double> SchroederEdc(const Waveform& rir);

// Least-squares line through the EDC between -5 and -25 dB, extrapolated to a
// 60 dB decay. Throws kInsufficientDecay when the EDC never reaches -25 dB.
Rt60Estimate EstimateRt60(const Waveform& rir);

// Mean and sample standard deviation (n - 1). Throws kTooFew for < 2 values.
Rt60Summary SummarizeRt60(std::span<const Rt60Estimate> estimates);

}  // namespace speval

#endif  // SPEVAL_RT60_H_
