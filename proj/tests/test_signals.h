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

// Deterministic test signals shared with the Python fixture generators in
// tests/oracles/signals.py. Both sides must produce the same samples (up to
// libm rounding), so only splitmix64 and sin() are used.

#ifndef SPEVAL_TESTS_TEST_SIGNALS_H_
#define SPEVAL_TESTS_TEST_SIGNALS_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace speval::testing {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t Next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // Uniform in [0, 1).
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Harmonic tone gated by a raised syllabic envelope, with real pauses.
inline std::vector<double> SpeechLike(std::uint64_t seed, std::size_t n, int rate) {
  SplitMix64 g(seed);
  const double f0 = 100.0 + 120.0 * g.Uniform();
  const double syll = 3.0 + 2.0 * g.Uniform();
  const double phase = 2.0 * std::numbers::pi * g.Uniform();
  double ph[8];
  for (double& p : ph) p = 2.0 * std::numbers::pi * g.Uniform();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    const double s = std::sin(2.0 * std::numbers::pi * syll * t + phase);
    const double env = s > 0.0 ? s * s : 0.0;
    double v = 0.0;
    for (int h = 1; h <= 8; ++h) v += std::sin(2.0 * std::numbers::pi * h * f0 * t + ph[h - 1]) / h;
    x[i] = 0.2 * env * v;
  }
  return x;
}

// Uniform white noise in [-1, 1).
inline std::vector<double> UniformNoise(std::uint64_t seed, std::size_t n) {
  SplitMix64 g(seed);
  std::vector<double> x(n);
  for (double& v : x) v = 2.0 * g.Uniform() - 1.0;
  return x;
}

// speech + noise scaled to `snr_db` over the whole signal.
inline std::vector<double> AddNoiseAtSnr(const std::vector<double>& s,
                                         const std::vector<double>& n, double snr_db) {
  double ps = 0.0;
  double pn = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    ps += s[i] * s[i];
    pn += n[i] * n[i];
  }
  const double g = std::sqrt(ps / (pn * std::pow(10.0, snr_db / 10.0)));
  std::vector<double> y(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) y[i] = s[i] + g * n[i];
  return y;
}

inline std::vector<double> Gaussian(std::uint64_t seed, std::size_t n, double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, sd);
  std::vector<double> x(n);
  for (double& v : x) v = d(rng);
  return x;
}

// Fresh scratch directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("speval_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace speval::testing

#endif  // SPEVAL_TESTS_TEST_SIGNALS_H_
