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

#include "speval/mixgen.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gtest/gtest.h"
#include "speval/audio_io.h"
#include "speval/error.h"
#include "speval/synthetic.h"
#include "test_signals.h"

namespace speval {
namespace {

using ::speval::testing::ScratchDir;

class MixgenAssetsTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new ScratchDir("mixgen_assets");
    paths_ = new DeskAssetPaths(WriteDeskAssets(dir_->path()));
    inputs_ = new DatasetInputs(LoadDatasetInputs(*paths_));
  }
  static void TearDownTestSuite() {
    delete inputs_;
    delete paths_;
    delete dir_;
  }
  static PlanSampler Sampler(MixConfig cfg = {}) {
    return PlanSampler(cfg, inputs_->catalog, inputs_->patterns, inputs_->corpus, inputs_->noises);
  }

  static ScratchDir* dir_;
  static DeskAssetPaths* paths_;
  static DatasetInputs* inputs_;
};

ScratchDir* MixgenAssetsTest::dir_ = nullptr;
DeskAssetPaths* MixgenAssetsTest::paths_ = nullptr;
DatasetInputs* MixgenAssetsTest::inputs_ = nullptr;

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(MixConfigTest, Validation) {
  EXPECT_NO_THROW(ValidateMixConfig({}));
  MixConfig bad;
  bad.speaker_count_probs = {0.5, 0.5, 0.5};
  EXPECT_THROW(ValidateMixConfig(bad), Error);
  bad.speaker_count_probs = {1.2, -0.2, 0.0};
  EXPECT_THROW(ValidateMixConfig(bad), Error);
  const MixConfig d;
  EXPECT_DOUBLE_EQ(d.sigma1_db, 6.7082);
  EXPECT_DOUBLE_EQ(d.sigma2_db, 2.0);
  EXPECT_DOUBLE_EQ(d.snr_mean_db, 5.0);
}

TEST(RirCatalogTest, BathroomsAndMinimumPositions) {
  EXPECT_TRUE(IsBathroom(RirEntry{"h1", "Bathroom", "a1", "p1", "c1", "x.wav"}));
  EXPECT_FALSE(IsBathroom(RirEntry{"h1", "living", "a1", "p1", "c1", "x.wav"}));
  std::vector<RirEntry> e;
  for (const char* pos : {"p1", "p2", "p3"}) e.push_back({"h1", "living", "a1", pos, "c1", "x.wav"});
  e.push_back({"h1", "bathroom", "a1", "p1", "c1", "x.wav"});
  EXPECT_EQ(BuildRirCatalog(e).entries.size(), 3u);
  e.push_back({"h1", "kitchen", "a1", "p1", "c1", "x.wav"});
  try {
    BuildRirCatalog(e);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kCatalogTooSmall);
  }
}

TEST_F(MixgenAssetsTest, DegenerateSpeakerCount) {
  MixConfig cfg;
  cfg.speaker_count_probs = {1.0, 0.0, 0.0};
  const PlanSampler s = Sampler(cfg);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 300; ++i) EXPECT_EQ(s.Sample(rng).n_speakers, 1);
}

TEST_F(MixgenAssetsTest, PlanInvariants) {
  const PlanSampler s = Sampler();
  std::mt19937_64 rng(2);
  for (int i = 0; i < 2000; ++i) {
    const MixturePlan p = s.Sample(rng);
    ASSERT_EQ(p.speakers.size(), static_cast<std::size_t>(p.n_speakers));
    std::set<std::string> positions;
    std::set<std::string> speakers;
    for (const auto& sp : p.speakers) {
      EXPECT_FALSE(IsBathroom(sp.rir));
      EXPECT_EQ(sp.rir.home_id, p.speakers[0].rir.home_id);
      EXPECT_EQ(sp.rir.room_id, p.speakers[0].rir.room_id);
      EXPECT_EQ(sp.rir.array_id, p.speakers[0].rir.array_id);
      EXPECT_EQ(sp.rir.channel_id, p.speakers[0].rir.channel_id);
      positions.insert(sp.rir.source_position_id);
      speakers.insert(sp.speaker_id);
      EXPECT_FALSE(sp.activity.empty());
    }
    EXPECT_EQ(positions.size(), p.speakers.size());
    EXPECT_EQ(speakers.size(), p.speakers.size());
  }
}

TEST_F(MixgenAssetsTest, EmpiricalDistributions) {
  const PlanSampler s = Sampler();
  std::mt19937_64 rng(10000);
  std::array<int, 3> counts{};
  std::vector<double> y;
  std::vector<double> x;
  int male = 0;
  int total_speakers = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const MixturePlan p = s.Sample(rng);
    ++counts[p.n_speakers - 1];
    x.push_back(p.global_snr_db);
    for (const auto& sp : p.speakers) {
      y.push_back(sp.snr_db);
      male += sp.gender == Gender::kMale;
      ++total_speakers;
    }
  }
  const std::array<double, 3> probs = {0.60, 0.35, 0.05};
  double chi2 = 0.0;
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(counts[k] / static_cast<double>(n), probs[k], 0.02);
    chi2 += std::pow(counts[k] - n * probs[k], 2) / (n * probs[k]);
  }
  EXPECT_LT(chi2, 13.82);  // chi2(2) at p = 0.001
  auto moments = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double a : v) m += a;
    m /= v.size();
    double ss = 0.0;
    for (double a : v) ss += (a - m) * (a - m);
    return std::make_pair(m, std::sqrt(ss / (v.size() - 1)));
  };
  const auto [ym, ysd] = moments(y);
  EXPECT_NEAR(ym, 5.0, 0.3);
  EXPECT_NEAR(ysd, 7.0, 0.3);
  const auto [xm, xsd] = moments(x);
  EXPECT_NEAR(xm, 5.0, 0.3);
  EXPECT_NEAR(xsd, 6.7082, 0.3);
  EXPECT_NEAR(male / static_cast<double>(total_speakers), 0.5, 0.02);
}

TEST(FitUtterancesTest, TrimsAtIntervalEnd) {
  std::vector<double> u(48000);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.1 + 1e-6 * i;
  const std::vector<Waveform> utts = {Waveform(u, 16000)};
  const std::vector<Interval> pattern = {{0.0, 2.0}};
  const Waveform out = FitUtterances(pattern, utts, 64000, 16000);
  ASSERT_EQ(out.size(), 64000u);
  for (std::size_t i = 0; i < 32000; ++i) ASSERT_EQ(out[i], u[i]);
  for (std::size_t i = 32000; i < out.size(); ++i) ASSERT_EQ(out[i], 0.0);
}

TEST(FitUtterancesTest, EmptyPatternAndShortage) {
  const std::vector<Waveform> utts = {Waveform(std::vector<double>(100, 0.5), 16000)};
  const Waveform out = FitUtterances({}, utts, 500, 16000);
  EXPECT_EQ(out.size(), 500u);
  EXPECT_TRUE(std::all_of(out.samples().begin(), out.samples().end(), [](double v) { return v == 0.0; }));
  const std::vector<Interval> pattern = {{0.0, 0.02}};
  try {
    FitUtterances(pattern, utts, 500, 16000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientMaterial);
  }
}

TEST(FitUtterancesTest, SupportMatchesPatternExactly) {
  std::mt19937_64 rng(3);
  std::vector<Waveform> utts;
  for (int i = 0; i < 4; ++i) utts.push_back(SyntheticSpeech(1.0, 16000, 120.0, rng));
  for (auto& w : utts) {
    std::vector<double> x(w.samples().begin(), w.samples().end());
    for (double& v : x) v = v == 0.0 ? 1e-3 : v;
    w = Waveform(x, 16000);
  }
  const std::vector<Interval> pattern = {{0.25, 1.25}, {2.0, 3.0}};
  const std::size_t length = 4 * 16000;
  const Waveform out = FitUtterances(pattern, utts, length, 16000);
  const auto support = IntervalsToSamples(pattern, 16000, length);
  std::vector<bool> inside(length, false);
  for (const auto& [a, b] : support) {
    for (std::size_t i = a; i < b; ++i) inside[i] = true;
  }
  for (std::size_t i = 0; i < length; ++i) {
    if (inside[i]) {
      ASSERT_NE(out[i], 0.0) << i;
    } else {
      ASSERT_EQ(out[i], 0.0) << i;
    }
  }
}

TEST(IntervalsToSamplesTest, RoundsAndClips) {
  const std::vector<Interval> iv = {{0.0, 0.5}, {0.75, 2.0}};
  const auto s = IntervalsToSamples(iv, 16000, 16000);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], std::make_pair(std::size_t{0}, std::size_t{8000}));
  EXPECT_EQ(s[1], std::make_pair(std::size_t{12000}, std::size_t{16000}));
}

TEST(FitNoiseTest, CropAndLoop) {
  std::mt19937_64 rng(4);
  const Waveform noise = SyntheticNoise(2.0, 16000, rng);
  std::size_t offset = 0;
  bool looped = true;
  const Waveform crop = FitNoise(noise, 16000, rng, &offset, &looped);
  EXPECT_FALSE(looped);
  ASSERT_EQ(crop.size(), 16000u);
  EXPECT_LE(offset + 16000, noise.size());
  for (std::size_t i = 0; i < crop.size(); ++i) ASSERT_EQ(crop[i], noise[offset + i]);
  const Waveform loop = FitNoise(noise, 80000, rng, &offset, &looped);
  EXPECT_TRUE(looped);
  EXPECT_EQ(loop.size(), 80000u);
  for (std::size_t i = 0; i < 1000; ++i) ASSERT_EQ(loop[i], noise[i]);
}

MixturePlan TwoSpeakerPlan() {
  MixturePlan p;
  p.mixture_id = "t";
  p.n_speakers = 2;
  p.duration_s = 3.0;
  p.render_seed = 17;
  p.speakers.push_back({"M0", Gender::kMale, {}, {{0.2, 2.0}}, 3.0});
  p.speakers.push_back({"F0", Gender::kFemale, {}, {{1.0, 2.9}}, -4.0});
  return p;
}

TEST(RenderMixtureTest, DiracRirMatchedPowerHasUnitGain) {
  std::vector<double> s(16000);
  std::vector<double> nz(16000);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> d(0.0, 0.1);
  for (double& v : s) v = d(rng);
  for (double& v : nz) v = d(rng);
  double ps = 0.0;
  double pn = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    ps += s[i] * s[i];
    pn += nz[i] * nz[i];
  }
  for (double& v : nz) v *= std::sqrt(ps / pn);
  MixturePlan p;
  p.n_speakers = 1;
  p.duration_s = 1.0;
  p.speakers.push_back({"a", Gender::kMale, {}, {{0.0, 1.0}}, 0.0});
  const std::vector<Waveform> dry = {Waveform(s, 16000)};
  const std::vector<Waveform> rir = {Waveform({1.0}, 16000)};
  const MixtureRecord r = RenderMixture(p, dry, rir, Waveform(nz, 16000));
  ASSERT_EQ(r.peak_scale, 1.0);
  for (std::size_t i = 0; i < s.size(); i += 97) EXPECT_NEAR(r.reverberant_speech[0][i], s[i], 1e-6);
}

TEST(RenderMixtureTest, SnrFidelityAndAdditivity) {
  std::mt19937_64 rng(6);
  const MixturePlan p = TwoSpeakerPlan();
  std::vector<Waveform> dry;
  std::vector<Waveform> rirs;
  for (const auto& sp : p.speakers) {
    std::vector<Waveform> utts;
    for (int i = 0; i < 3; ++i) utts.push_back(SyntheticSpeech(1.5, 16000, 150.0, rng));
    dry.push_back(FitUtterances(sp.activity, utts, 48000, 16000));
    rirs.push_back(SyntheticRir(0.4, 16000, rng));
  }
  const MixtureRecord r = RenderMixture(p, dry, rirs, SyntheticNoise(2.0, 16000, rng));
  ASSERT_EQ(r.mixture.size(), 48000u);
  EXPECT_EQ(r.noise.size(), 48000u);
  EXPECT_EQ(r.clean_reference.size(), 48000u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_NEAR(MeasuredSpeakerSnrDb(r.reverberant_speech[k], r.noise, p.speakers[k].activity),
                p.speakers[k].snr_db, 0.01);
  }
  for (std::size_t i = 0; i < r.mixture.size(); ++i) {
    const float clean = static_cast<float>(r.reverberant_speech[0][i]) + static_cast<float>(r.reverberant_speech[1][i]);
    ASSERT_EQ(static_cast<float>(r.clean_reference[i]), clean);
    ASSERT_EQ(static_cast<float>(r.mixture[i]), clean + static_cast<float>(r.noise[i]));
  }
}

TEST(RenderMixtureTest, SilentSpeechIsRejected) {
  MixturePlan p;
  p.n_speakers = 1;
  p.duration_s = 1.0;
  p.speakers.push_back({"a", Gender::kMale, {}, {{0.0, 1.0}}, 0.0});
  const std::vector<Waveform> dry = {Waveform::Zeros(16000, 16000)};
  const std::vector<Waveform> rir = {Waveform({1.0}, 16000)};
  std::mt19937_64 rng(1);
  try {
    RenderMixture(p, dry, rir, SyntheticNoise(1.0, 16000, rng));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSilentComponent);
  }
}

TEST_F(MixgenAssetsTest, GenerateDatasetCountZero) {
  ScratchDir out("mixgen_zero");
  const auto m = GenerateDataset({}, *inputs_, 0, out.path());
  EXPECT_TRUE(m.empty());
  EXPECT_TRUE(ReadFile(out.path() / "manifest.jsonl").empty());
}

TEST_F(MixgenAssetsTest, GenerateDatasetIsDeterministicAndAdditive) {
  ScratchDir a("mixgen_a");
  ScratchDir b("mixgen_b");
  MixConfig cfg;
  cfg.seed = 42;
  const auto ma = GenerateDataset(cfg, *inputs_, 6, a.path(), 3);
  const auto mb = GenerateDataset(cfg, *inputs_, 6, b.path(), 1);
  ASSERT_EQ(ma.size(), 6u);
  EXPECT_EQ(ReadFile(a.path() / "manifest.jsonl"), ReadFile(b.path() / "manifest.jsonl"));
  for (const auto& e : ma) {
    const auto da = a.path() / e.mixture_id;
    const auto db = b.path() / e.mixture_id;
    for (const char* f : {"mix.wav", "noise.wav", "clean.wav", "meta.json", "speech_0.wav"}) {
      EXPECT_EQ(ReadFile(da / f), ReadFile(db / f)) << e.mixture_id << "/" << f;
    }
    const Waveform mix = LoadWav(da / "mix.wav");
    const Waveform noise = LoadWav(da / "noise.wav");
    const auto meta = nlohmann::json::parse(ReadFile(da / "meta.json"));
    const int n = meta["n_speakers"].get<int>();
    std::vector<Waveform> speech;
    for (int k = 0; k < n; ++k) speech.push_back(LoadWav(da / ("speech_" + std::to_string(k) + ".wav")));
    for (std::size_t i = 0; i < mix.size(); ++i) {
      float clean = static_cast<float>(speech[0][i]);
      for (int k = 1; k < n; ++k) clean += static_cast<float>(speech[k][i]);
      ASSERT_EQ(static_cast<float>(mix[i]), clean + static_cast<float>(noise[i]));
    }
    EXPECT_EQ(e.subset, std::to_string(n));
    EXPECT_EQ(e.per_speaker_snr_db.size(), static_cast<std::size_t>(n));
  }
  std::set<std::string> ids;
  for (const auto& e : ma) ids.insert(e.mixture_id);
  EXPECT_EQ(ids.size(), ma.size());
}

TEST_F(MixgenAssetsTest, LoadersResolveRelativePaths) {
  EXPECT_FALSE(inputs_->catalog.entries.empty());
  for (const auto& e : inputs_->catalog.entries) {
    EXPECT_FALSE(IsBathroom(e));
    EXPECT_TRUE(std::filesystem::exists(e.wav_path)) << e.wav_path;
  }
  for (const auto& s : inputs_->corpus.speakers) {
    for (const auto& u : s.utterances) EXPECT_TRUE(std::filesystem::exists(u));
  }
  EXPECT_FALSE(inputs_->patterns.empty());
  EXPECT_FALSE(inputs_->noises.empty());
}

}  // namespace
}  // namespace speval
