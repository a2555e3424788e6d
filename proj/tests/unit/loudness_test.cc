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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "speval/audio_io.h"
#include "speval/error.h"
#include "test_signals.h"

namespace speval {
namespace {

Waveform Sine(double freq, double amp, double seconds, int rate) {
  std::vector<double> x(static_cast<std::size_t>(seconds * rate));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = amp * std::sin(2 * std::numbers::pi * freq * i / rate);
  return Waveform(std::move(x), rate);
}

TEST(KWeightingTest, MatchesTabulated48kCoefficients) {
  // Coefficients printed in the recommendation for 48 kHz.
  const auto f = KWeightingFilter(48000);
  EXPECT_NEAR(f[0].b[0], 1.53512485958697, 1e-6);
  EXPECT_NEAR(f[0].b[1], -2.69169618940638, 1e-6);
  EXPECT_NEAR(f[0].b[2], 1.19839281085285, 1e-6);
  EXPECT_NEAR(f[0].a[0], -1.69065929318241, 1e-6);
  EXPECT_NEAR(f[0].a[1], 0.73248077421585, 1e-6);
  EXPECT_NEAR(f[1].a[0], -1.99004745483398, 1e-6);
  EXPECT_NEAR(f[1].a[1], 0.99007225036621, 1e-6);
}

TEST(LoudnessTest, FullScaleSine997HzAt48k) {
  const LoudnessResult r = MeasureLoudness(Sine(997.0, 1.0, 10.0, 48000));
  EXPECT_NEAR(r.integrated_lufs, -3.01, 0.1);
  EXPECT_GT(r.gated_block_count, 0u);
}

TEST(LoudnessTest, FullScaleSine997HzAt16k) {
  EXPECT_NEAR(MeasureLoudness(Sine(997.0, 1.0, 10.0, 16000)).integrated_lufs, -3.01, 0.1);
}

TEST(LoudnessTest, SilenceAndShortInput) {
  try {
    MeasureLoudness(Waveform::Zeros(16000, 16000));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAllSilent);
  }
  try {
    MeasureLoudness(Waveform::Zeros(6000, 16000));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooShort);
  }
  EXPECT_THROW(NormalizeLoudness(Waveform::Zeros(16000, 16000), -30.0), Error);
}

TEST(LoudnessTest, GainAdditivity) {
  const auto s = testing::SpeechLike(7, 3 * 16000, 16000);
  const Waveform w(s, 16000);
  const double base = MeasureLoudness(w).integrated_lufs;
  ASSERT_GT(base, -50.0);
  for (double g = -20.0; g <= 8.0; g += 4.0) {
    EXPECT_NEAR(MeasureLoudness(ApplyGain(w, g)).integrated_lufs, base + g, 0.01) << g;
  }
}

TEST(LoudnessTest, NormalizationHitsTargetAndIsIdempotent) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> gain(-20.0, 0.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Waveform w = ApplyGain(Waveform(testing::SpeechLike(seed, 2 * 16000, 16000), 16000), gain(rng));
    const Waveform n = NormalizeLoudness(w, kDefaultTargetLufs);
    EXPECT_NEAR(MeasureLoudness(n).integrated_lufs, -30.0, 0.1);
    EXPECT_LT(std::abs(LoudnessNormalizationGain(n, kDefaultTargetLufs)), 0.01);
  }
}

// Frozen pyloudnorm 0.2.0 values (filter_class="DeMan"), see tests/oracles/gen_loudness_fixtures.py.
TEST(LoudnessTest, MatchesPyloudnormFixture) {
  std::ifstream in(std::string(SPEVAL_TEST_DATA_DIR) + "/loudness_pyloudnorm.csv");
  ASSERT_TRUE(in);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::vector<std::string> f;
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    ASSERT_EQ(f.size(), 8u);
    const int rate = std::stoi(f[1]);
    const std::size_t n = std::stoull(f[2]);
    const auto noise = testing::UniformNoise(std::stoull(f[4]), n);
    std::vector<double> x = testing::AddNoiseAtSnr(testing::SpeechLike(std::stoull(f[3]), n, rate), noise, std::stod(f[5]));
    double peak = 0.0;
    for (double v : x) peak = std::max(peak, std::abs(v));
    for (double& v : x) v = std::stod(f[6]) * v / peak;
    const double lufs = MeasureLoudness(Waveform(std::move(x), rate)).integrated_lufs;
    EXPECT_NEAR(lufs, std::stod(f[7]), 1e-6) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 30);
}

}  // namespace
}  // namespace speval
