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

#ifndef SPEVAL_AUDIO_IO_H_
#define SPEVAL_AUDIO_IO_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace speval {

// Mono PCM signal. Samples are nominally in [-1, 1]; the constructor rejects
// non-finite samples and non-positive rates, so every live Waveform satisfies
// those invariants.
class Waveform {
 public:
  Waveform() = default;
  Waveform(std::vector<double> samples, int sample_rate);

  static Waveform Zeros(std::size_t length, int sample_rate);

  std::span<const double> samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double duration_seconds() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }
  double operator[](std::size_t i) const { return samples_[i]; }

  // Moves the sample buffer out, leaving the waveform empty.
  std::vector<double> TakeSamples() && { return std::move(samples_); }

  friend bool operator==(const Waveform&, const Waveform&) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_ = 1;
};

enum class WavEncoding { kPcm16, kFloat32 };

// Reads a mono RIFF/WAVE file (PCM 16-bit or IEEE float 32-bit).
Waveform LoadWav(const std::filesystem::path& path);

// Writes `w`. Samples outside [-1, 1] are hard-clipped; the number of clipped
// samples is returned (and logged to stderr when non-zero).
std::size_t SaveWav(const Waveform& w, const std::filesystem::path& path,
                    WavEncoding encoding = WavEncoding::kFloat32);

// In-memory variants used by the HTTP audio endpoint and tests.
std::vector<unsigned char> EncodeWav(const Waveform& w, WavEncoding encoding,
                                     std::size_t* clipped = nullptr);
Waveform DecodeWav(std::span<const unsigned char> bytes);

// Band-limited resampling with a Kaiser-windowed sinc polyphase filter, 64 taps
// per phase, cutoff at 0.95 of the lower Nyquist frequency. Output length is
// round(len * target_rate / source_rate).
Waveform Resample(const Waveform& w, int target_rate);

double DbToAmplitude(double gain_db);
Waveform ApplyGain(const Waveform& w, double gain_db);

}  // namespace speval

#endif  // SPEVAL_AUDIO_IO_H_
