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

#include <cmath>
#include <limits>

#include "speval/error.h"
#include "speval/metrics.h"

namespace speval {

double SiSdr(const Waveform& reference, const Waveform& estimate) {
  if (reference.size() != estimate.size() ||
      reference.sample_rate() != estimate.sample_rate()) {
    throw Error(ErrorCode::kLengthMismatch,
                "reference has " + std::to_string(reference.size()) +
                    " samples, estimate " + std::to_string(estimate.size()));
  }
  const auto s = reference.samples();
  const auto s_hat = estimate.samples();
  double dot = 0.0;
  double ref_energy = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    dot += s_hat[i] * s[i];
    ref_energy += s[i] * s[i];
  }
  if (ref_energy == 0.0) {
    throw Error(ErrorCode::kZeroReference, "reference is all zeros");
  }
  const double beta = dot / ref_energy;
  double target_energy = 0.0;
  double residual_energy = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double target = beta * s[i];
    const double residual = s_hat[i] - target;
    target_energy += target * target;
    residual_energy += residual * residual;
  }
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  // A silent estimate has no projection at all; floor it so the score stays
  // finite (and very negative).
  if (target_energy == 0.0) target_energy = kEps;
  return 10.0 * std::log10(target_energy / (residual_energy + kEps));
}

}  // namespace speval
