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

#include "speval/audio_io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numeric>
#include <string>

#include "speval/error.h"

namespace speval {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

constexpr int kResampleTaps = 64;
constexpr double kResampleCutoff = 0.95;
constexpr double kKaiserBeta = 8.6;

static_assert(std::endian::native == std::endian::little,
              "WAV codec assumes a little-endian host");

std::uint16_t ReadU16(std::span<const unsigned char> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t ReadU32(std::span<const unsigned char> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

void PutU16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void PutU32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
  }
}

void PutTag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

bool TagIs(std::span<const unsigned char> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

// Zeroth-order modified Bessel function of the first kind (power series).
double BesselI0(double x) {
  double sum = 1.0;
  double term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

double Sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

// Taps for one polyphase branch. `frac` is the fractional input position of
// the output sample relative to the first tap's centre index.
void DesignPhase(double frac, double cutoff_cycles, std::span<double> taps) {
  constexpr double kHalf = kResampleTaps / 2.0;
  const double i0_beta = BesselI0(kKaiserBeta);
  double sum = 0.0;
  for (int k = 0; k < kResampleTaps; ++k) {
    // Tap k reads input index floor(t) + k - (kResampleTaps/2 - 1).
    const double d = static_cast<double>(k - (kResampleTaps / 2 - 1)) - frac;
    const double r = d / kHalf;
    const double window =
        std::abs(r) >= 1.0 ? 0.0
                           : BesselI0(kKaiserBeta * std::sqrt(1.0 - r * r)) /
                                 i0_beta;
    taps[k] = 2.0 * cutoff_cycles * Sinc(2.0 * cutoff_cycles * d) * window;
    sum += taps[k];
  }
  if (sum != 0.0) {
    for (double& t : taps) t /= sum;
  }
}

}  // namespace

Waveform::Waveform(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  if (!std::all_of(samples_.begin(), samples_.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::kInvalidArgument, "waveform has non-finite samples");
  }
}

Waveform Waveform::Zeros(std::size_t length, int sample_rate) {
  return Waveform(std::vector<double>(length, 0.0), sample_rate);
}

Waveform DecodeWav(std::span<const unsigned char> bytes) {
  if (bytes.size() < 12 || !TagIs(bytes, 0, "RIFF") ||
      !TagIs(bytes, 8, "WAVE")) {
    throw Error(ErrorCode::kCorruptHeader, "missing RIFF/WAVE signature");
  }
  bool have_fmt = false;
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t chunk_size = ReadU32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (TagIs(bytes, pos, "fmt ")) {
      if (chunk_size < 16 || body + chunk_size > bytes.size()) {
        throw Error(ErrorCode::kCorruptHeader, "truncated fmt chunk");
      }
      format = ReadU16(bytes, body);
      channels = ReadU16(bytes, body + 2);
      rate = ReadU32(bytes, body + 4);
      bits = ReadU16(bytes, body + 14);
      if (format == kFormatExtensible) {
        if (chunk_size < 40) {
          throw Error(ErrorCode::kCorruptHeader, "truncated extensible fmt");
        }
        // First two bytes of the SubFormat GUID carry the real format tag.
        format = ReadU16(bytes, body + 24);
      }
      have_fmt = true;
    } else if (TagIs(bytes, pos, "data")) {
      if (!have_fmt) {
        throw Error(ErrorCode::kCorruptHeader, "data chunk before fmt chunk");
      }
      if (channels != 1) {
        throw Error(ErrorCode::kUnsupportedFormat,
                    "only mono files are supported, got " +
                        std::to_string(channels) + " channels");
      }
      if (rate == 0) throw Error(ErrorCode::kCorruptHeader, "zero sample rate");
      const std::size_t available =
          std::min<std::size_t>(chunk_size, bytes.size() - body);
      std::vector<double> samples;
      if (format == kFormatPcm && bits == 16) {
        const std::size_t n = available / 2;
        samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          const auto v = static_cast<std::int16_t>(ReadU16(bytes, body + 2 * i));
          samples[i] = static_cast<double>(v) / 32768.0;
        }
      } else if (format == kFormatFloat && bits == 32) {
        const std::size_t n = available / 4;
        samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          samples[i] = std::bit_cast<float>(ReadU32(bytes, body + 4 * i));
        }
      } else {
        throw Error(ErrorCode::kUnsupportedFormat,
                    "unsupported encoding (format " + std::to_string(format) +
                        ", " + std::to_string(bits) + " bits)");
      }
      if (available < chunk_size) {
        throw Error(ErrorCode::kCorruptHeader, "truncated data chunk");
      }
      return Waveform(std::move(samples), static_cast<int>(rate));
    }
    pos = body + chunk_size + (chunk_size & 1);
  }
  throw Error(ErrorCode::kCorruptHeader, have_fmt ? "no data chunk"
                                                  : "no fmt chunk");
}

Waveform LoadWav(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kFileNotFound, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  try {
    return DecodeWav(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<unsigned char> EncodeWav(const Waveform& w, WavEncoding encoding,
                                     std::size_t* clipped) {
  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint32_t block_align = bits / 8;
  const auto data_bytes = static_cast<std::uint32_t>(w.size() * block_align);

  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, pcm ? kFormatPcm : kFormatFloat);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(w.sample_rate()));
  PutU32(out, static_cast<std::uint32_t>(w.sample_rate()) * block_align);
  PutU16(out, static_cast<std::uint16_t>(block_align));
  PutU16(out, bits);
  PutTag(out, "data");
  PutU32(out, data_bytes);

  std::size_t n_clipped = 0;
  for (double v : w.samples()) {
    if (v > 1.0 || v < -1.0) {
      ++n_clipped;
      v = std::clamp(v, -1.0, 1.0);
    }
    if (pcm) {
      const double scaled = std::clamp(std::round(v * 32768.0), -32768.0, 32767.0);
      PutU16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    } else {
      PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
  }
  if (clipped != nullptr) *clipped = n_clipped;
  return out;
}

std::size_t SaveWav(const Waveform& w, const std::filesystem::path& path,
                    WavEncoding encoding) {
  std::size_t clipped = 0;
  const std::vector<unsigned char> bytes = EncodeWav(w, encoding, &clipped);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
  if (clipped > 0) {
    std::cerr << "warning: " << path.string() << ": clipped " << clipped
              << " samples to [-1, 1]\n";
  }
  return clipped;
}

Waveform Resample(const Waveform& w, int target_rate) {
  if (target_rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "target rate must be positive");
  }
  const int source_rate = w.sample_rate();
  if (target_rate == source_rate) return w;

  const long g = std::gcd(static_cast<long>(source_rate), static_cast<long>(target_rate));
  const long up = target_rate / g;    // L
  const long down = source_rate / g;  // M
  const auto in = w.samples();
  const auto n_in = static_cast<long>(in.size());
  const auto n_out = static_cast<long>(
      std::llround(static_cast<double>(n_in) * target_rate / source_rate));

  // Cutoff in cycles per input sample.
  const double cutoff_cycles =
      kResampleCutoff * 0.5 * std::min(source_rate, target_rate) / source_rate;

  constexpr long kMaxCachedPhases = 4096;
  std::vector<double> table;
  if (up <= kMaxCachedPhases) {
    table.resize(static_cast<std::size_t>(up * kResampleTaps));
    for (long r = 0; r < up; ++r) {
      DesignPhase(static_cast<double>(r) / up, cutoff_cycles,
                  std::span<double>(table.data() + r * kResampleTaps, kResampleTaps));
    }
  }

  std::vector<double> out(static_cast<std::size_t>(n_out), 0.0);
  std::vector<double> scratch(kResampleTaps);
  for (long n = 0; n < n_out; ++n) {
    const long num = n * down;
    const long base = num / up;
    const long phase = num % up;
    std::span<const double> taps;
    if (table.empty()) {
      DesignPhase(static_cast<double>(phase) / up, cutoff_cycles, scratch);
      taps = scratch;
    } else {
      taps = std::span<const double>(table.data() + phase * kResampleTaps,
                                     kResampleTaps);
    }
    double acc = 0.0;
    const long first = base - (kResampleTaps / 2 - 1);
    for (int k = 0; k < kResampleTaps; ++k) {
      const long idx = first + k;
      if (idx >= 0 && idx < n_in) acc += taps[k] * in[idx];
    }
    out[n] = acc;
  }
  return Waveform(std::move(out), target_rate);
}

double DbToAmplitude(double gain_db) { return std::pow(10.0, gain_db / 20.0); }

Waveform ApplyGain(const Waveform& w, double gain_db) {
  if (!std::isfinite(gain_db)) {
    throw Error(ErrorCode::kInvalidArgument, "gain must be finite");
  }
  const double g = DbToAmplitude(gain_db);
  std::vector<double> out(w.samples().begin(), w.samples().end());
  for (double& v : out) v *= g;
  return Waveform(std::move(out), w.sample_rate());
}

}  // namespace speval
