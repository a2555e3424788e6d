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

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "speval/error.h"
#include "speval/fft.h"
#include "speval/metrics.h"

namespace speval {

namespace {

constexpr int kStoiRate = 10000;
constexpr std::size_t kFrameLength = 256;  // 25.6 ms at 10 kHz
constexpr std::size_t kHop = kFrameLength / 2;
constexpr std::size_t kNfft = 512;
constexpr std::size_t kNumBands = 15;
constexpr double kMinBandFrequency = 150.0;
constexpr std::size_t kSegmentFrames = 30;  // 384 ms
constexpr double kLowerSdrDb = -15.0;
constexpr double kDynamicRangeDb = 40.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Hann window without the zero end points (MATLAB `hanning`).
std::vector<double> HannWindow(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i + 1) /
                                static_cast<double>(n + 1));
  }
  return w;
}

// [first, last) FFT bin ranges of the one-third octave bands. Band edges are
// snapped to the nearest bin.
std::vector<std::pair<std::size_t, std::size_t>> ThirdOctaveBands() {
  const std::size_t n_bins = kNfft / 2 + 1;
  auto nearest_bin = [&](double freq) {
    std::size_t best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * kStoiRate / kNfft;
      const double err = (f - freq) * (f - freq);
      if (err < best_err) {
        best_err = err;
        best = k;
      }
    }
    return best;
  };
  std::vector<std::pair<std::size_t, std::size_t>> bands;
  for (std::size_t k = 0; k < kNumBands; ++k) {
    const double kd = static_cast<double>(k);
    const double low = kMinBandFrequency * std::pow(2.0, (2.0 * kd - 1.0) / 6.0);
    const double high = kMinBandFrequency * std::pow(2.0, (2.0 * kd + 1.0) / 6.0);
    bands.emplace_back(nearest_bin(low), nearest_bin(high));
  }
  return bands;
}

// Start offsets of analysis frames; the final full frame is excluded when it
// ends exactly at the signal end, matching the reference implementation.
std::size_t FrameCount(std::size_t length) {
  if (length <= kFrameLength) return 0;
  return (length - kFrameLength - 1) / kHop + 1;
}

// Drops frames of the reference more than 40 dB below its loudest frame and
// overlap-adds the surviving windowed frames of both signals.
void RemoveSilentFrames(std::vector<double>& x, std::vector<double>& y) {
  const std::vector<double> window = HannWindow(kFrameLength);
  const std::size_t n_frames = FrameCount(x.size());
  std::vector<double> energy_db(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    double e = 0.0;
    for (std::size_t i = 0; i < kFrameLength; ++i) {
      const double v = window[i] * x[f * kHop + i];
      e += v * v;
    }
    energy_db[f] = 20.0 * std::log10(std::sqrt(e) + kEps);
  }
  const double max_db =
      n_frames == 0 ? 0.0 : *std::max_element(energy_db.begin(), energy_db.end());

  std::vector<std::size_t> kept;
  for (std::size_t f = 0; f < n_frames; ++f) {
    if (max_db - kDynamicRangeDb - energy_db[f] < 0.0) kept.push_back(f);
  }
  if (kept.empty()) {
    x.clear();
    y.clear();
    return;
  }
  const std::size_t out_len = (kept.size() - 1) * kHop + kFrameLength;
  std::vector<double> x_out(out_len, 0.0);
  std::vector<double> y_out(out_len, 0.0);
  for (std::size_t j = 0; j < kept.size(); ++j) {
    const std::size_t src = kept[j] * kHop;
    const std::size_t dst = j * kHop;
    for (std::size_t i = 0; i < kFrameLength; ++i) {
      x_out[dst + i] += window[i] * x[src + i];
      y_out[dst + i] += window[i] * y[src + i];
    }
  }
  x = std::move(x_out);
  y = std::move(y_out);
}

// Band envelopes: one row per frame, kNumBands columns (sqrt of band power).
std::vector<std::array<double, kNumBands>> BandEnvelopes(
    const std::vector<double>& x,
    const std::vector<std::pair<std::size_t, std::size_t>>& bands) {
  const std::vector<double> window = HannWindow(kFrameLength);
  const std::size_t n_frames = FrameCount(x.size());
  RealFft fft(kNfft);
  std::vector<double> frame(kFrameLength);
  std::vector<std::complex<double>> spectrum;
  std::vector<std::array<double, kNumBands>> env(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    for (std::size_t i = 0; i < kFrameLength; ++i) {
      frame[i] = window[i] * x[f * kHop + i];
    }
    fft.Forward(frame, spectrum);
    for (std::size_t b = 0; b < kNumBands; ++b) {
      double power = 0.0;
      for (std::size_t k = bands[b].first; k < bands[b].second; ++k) {
        power += std::norm(spectrum[k]);
      }
      env[f][b] = std::sqrt(power);
    }
  }
  return env;
}

}  // namespace

double Stoi(const Waveform& reference, const Waveform& estimate) {
  if (reference.size() != estimate.size() ||
      reference.sample_rate() != estimate.sample_rate()) {
    throw Error(ErrorCode::kLengthMismatch,
                "reference has " + std::to_string(reference.size()) +
                    " samples, estimate " + std::to_string(estimate.size()));
  }
  std::vector<double> x;
  std::vector<double> y;
  if (reference.sample_rate() == kStoiRate) {
    x.assign(reference.samples().begin(), reference.samples().end());
    y.assign(estimate.samples().begin(), estimate.samples().end());
  } else {
    x = Resample(reference, kStoiRate).TakeSamples();
    y = Resample(estimate, kStoiRate).TakeSamples();
  }

  RemoveSilentFrames(x, y);

  static const auto kBands = ThirdOctaveBands();
  const auto x_env = BandEnvelopes(x, kBands);
  const auto y_env = BandEnvelopes(y, kBands);
  if (x_env.size() < kSegmentFrames) {
    throw Error(ErrorCode::kTooShort,
                "only " + std::to_string(x_env.size()) +
                    " frames left after silence removal (need 30)");
  }

  const double clip = std::pow(10.0, -kLowerSdrDb / 20.0);
  const std::size_t n_segments = x_env.size() - kSegmentFrames + 1;
  double total = 0.0;
  std::array<double, kSegmentFrames> xs{};
  std::array<double, kSegmentFrames> ys{};
  for (std::size_t m = 0; m < n_segments; ++m) {
    for (std::size_t b = 0; b < kNumBands; ++b) {
      double x_norm = 0.0;
      double y_norm = 0.0;
      for (std::size_t t = 0; t < kSegmentFrames; ++t) {
        xs[t] = x_env[m + t][b];
        ys[t] = y_env[m + t][b];
        x_norm += xs[t] * xs[t];
        y_norm += ys[t] * ys[t];
      }
      const double scale = std::sqrt(x_norm) / (std::sqrt(y_norm) + kEps);
      double x_mean = 0.0;
      double y_mean = 0.0;
      for (std::size_t t = 0; t < kSegmentFrames; ++t) {
        ys[t] = std::min(ys[t] * scale, xs[t] * (1.0 + clip));
        x_mean += xs[t];
        y_mean += ys[t];
      }
      x_mean /= kSegmentFrames;
      y_mean /= kSegmentFrames;
      double xx = 0.0;
      double yy = 0.0;
      double xy = 0.0;
      for (std::size_t t = 0; t < kSegmentFrames; ++t) {
        const double xc = xs[t] - x_mean;
        const double yc = ys[t] - y_mean;
        xx += xc * xc;
        yy += yc * yc;
        xy += xc * yc;
      }
      total += xy / ((std::sqrt(xx) + kEps) * (std::sqrt(yy) + kEps));
    }
  }
  const double d = total / static_cast<double>(n_segments * kNumBands);
  return std::clamp(d, 0.0, 1.0);
}

}  // namespace speval
