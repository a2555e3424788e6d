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

#include "speval/rt60.h"

#include <algorithm>
#include <cmath>

#include "speval/error.h"

namespace speval {

namespace {
constexpr double kFitUpperDb = -5.0;
constexpr double kFitLowerDb = -25.0;
}  // namespace

std::vector<double> SchroederEdc(const Waveform& rir) {
  const auto h = rir.samples();
  if (h.empty()) throw Error(ErrorCode::kZeroSignal, "empty impulse response");
  std::vector<double> tail(h.size());
  double acc = 0.0;
  for (std::size_t i = h.size(); i-- > 0;) {
    acc += h[i] * h[i];
    tail[i] = acc;
  }
  const double total = tail[0];
  if (total == 0.0) throw Error(ErrorCode::kZeroSignal, "impulse response is silent");
  std::vector<double> edc(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double ratio = tail[i] / total;
    edc[i] = ratio > 0.0 ? std::max(10.0 * std::log10(ratio), kEdcFloorDb)
                         : kEdcFloorDb;
  }
  // Rounding in the running sum can produce a tiny uptick; the curve is
  // non-increasing by definition.
  edc[0] = 0.0;
  for (std::size_t i = 1; i < edc.size(); ++i) edc[i] = std::min(edc[i], edc[i - 1]);
  return edc;
}

Rt60Estimate EstimateRt60(const Waveform& rir) {
  const std::vector<double> edc = SchroederEdc(rir);
  const double fs = rir.sample_rate();
  if (edc.back() > kFitLowerDb) {
    throw Error(ErrorCode::kInsufficientDecay,
                "decay curve bottoms out at " + std::to_string(edc.back()) + " dB");
  }
  double n = 0.0;
  double sum_t = 0.0;
  double sum_y = 0.0;
  double sum_tt = 0.0;
  double sum_ty = 0.0;
  for (std::size_t i = 0; i < edc.size(); ++i) {
    if (edc[i] > kFitUpperDb) continue;
    if (edc[i] < kFitLowerDb) break;
    const double t = static_cast<double>(i) / fs;
    n += 1.0;
    sum_t += t;
    sum_y += edc[i];
    sum_tt += t * t;
    sum_ty += t * edc[i];
  }
  const double denom = n * sum_tt - sum_t * sum_t;
  if (n < 2.0 || denom <= 0.0) {
    throw Error(ErrorCode::kInsufficientDecay,
                "too few samples inside the -5/-25 dB fit range");
  }
  const double slope = (n * sum_ty - sum_t * sum_y) / denom;
  const double intercept = (sum_y - slope * sum_t) / n;
  if (!(slope < 0.0)) {
    throw Error(ErrorCode::kInsufficientDecay, "non-negative decay slope");
  }

  double ss_res = 0.0;
  double ss_tot = 0.0;
  const double mean_y = sum_y / n;
  for (std::size_t i = 0; i < edc.size(); ++i) {
    if (edc[i] > kFitUpperDb) continue;
    if (edc[i] < kFitLowerDb) break;
    const double t = static_cast<double>(i) / fs;
    const double fit = intercept + slope * t;
    ss_res += (edc[i] - fit) * (edc[i] - fit);
    ss_tot += (edc[i] - mean_y) * (edc[i] - mean_y);
  }
  Rt60Estimate est;
  est.rt60_s = -60.0 / slope;
  est.fit_slope_db_per_s = slope;
  est.fit_upper_db = kFitUpperDb;
  est.fit_lower_db = kFitLowerDb;
  est.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return est;
}

Rt60Summary SummarizeRt60(std::span<const Rt60Estimate> estimates) {
  if (estimates.size() < 2) {
    throw Error(ErrorCode::kTooFew, "need at least two RT60 estimates");
  }
  double mean = 0.0;
  for (const auto& e : estimates) mean += e.rt60_s;
  mean /= static_cast<double>(estimates.size());
  double ss = 0.0;
  for (const auto& e : estimates) ss += (e.rt60_s - mean) * (e.rt60_s - mean);
  return {mean, std::sqrt(ss / static_cast<double>(estimates.size() - 1))};
}

}  // namespace speval
