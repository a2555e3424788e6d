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

#include "speval/synthetic.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include <json.hpp>

#include "speval/error.h"
#include "speval/segmenter.h"

namespace speval {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Two-pole resonator with unit peak gain, applied in place.
void Resonate(std::vector<double>& x, double freq_hz, double bandwidth_hz, int rate) {
  const double r = std::exp(-std::numbers::pi * bandwidth_hz / rate);
  const double a1 = -2.0 * r * std::cos(2.0 * std::numbers::pi * freq_hz / rate);
  const double a2 = r * r;
  const double g = 1.0 - r;
  double y1 = 0.0, y2 = 0.0;
  for (double& v : x) {
    const double y = g * v - a1 * y1 - a2 * y2;
    y2 = y1;
    y1 = y;
    v = y;
  }
}

double Round2(double v) { return std::round(v * 100.0) / 100.0; }

void WriteJson(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

Waveform SyntheticSpeech(double duration_s, int sample_rate, double f0_hz,
                         std::mt19937_64& rng) {
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double syllable_rate = 3.0 + 2.0 * uni(rng);
  const double syllable_phase = 2.0 * std::numbers::pi * uni(rng);
  const int harmonics =
      std::max(1, std::min(24, static_cast<int>(0.45 * sample_rate / (f0_hz * 1.2))));

  std::vector<double> source(n);
  double phase = 0.0;
  double drift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    drift = 0.999 * drift + 0.002 * gauss(rng);
    const double f0 = f0_hz * (1.0 + 0.15 * std::tanh(drift * 5.0));
    phase += 2.0 * std::numbers::pi * f0 / sample_rate;
    if (phase > 2.0 * std::numbers::pi) phase -= 2.0 * std::numbers::pi;
    double v = 0.0;
    for (int h = 1; h <= harmonics; ++h) v += std::sin(h * phase) / h;
    source[i] = v + 0.05 * gauss(rng);
  }
  std::vector<double> f1 = source;
  std::vector<double> f2 = source;
  Resonate(f1, 500.0 + 300.0 * uni(rng), 120.0, sample_rate);
  Resonate(f2, 1300.0 + 900.0 * uni(rng), 200.0, sample_rate);

  std::vector<double> out(n);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double s = std::sin(2.0 * std::numbers::pi * syllable_rate * t + syllable_phase);
    const double env = 0.05 + 0.95 * s * s;
    out[i] = env * (f1[i] + 0.6 * f2[i]);
    peak = std::max(peak, std::abs(out[i]));
  }
  if (peak > 0.0) {
    for (double& v : out) v *= 0.5 / peak;
  }
  return Waveform(std::move(out), sample_rate);
}

Waveform SyntheticRir(double rt60_s, int sample_rate, std::mt19937_64& rng, double length_s) {
  if (!(rt60_s > 0.0)) throw Error(ErrorCode::kInvalidArgument, "RT60 must be positive");
  if (length_s <= 0.0) length_s = std::max(0.3, 1.5 * rt60_s);
  const auto n = static_cast<std::size_t>(std::llround(length_s * sample_rate));
  // Amplitude time constant: 60 dB energy decay over rt60.
  const double tau = rt60_s / (3.0 * std::log(10.0));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> h(n, 0.0);
  h[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    h[i] = 0.2 * gauss(rng) * std::exp(-static_cast<double>(i) / sample_rate / tau);
  }
  return Waveform(std::move(h), sample_rate);
}

Waveform SyntheticNoise(double duration_s, int sample_rate, std::mt19937_64& rng) {
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> out(n);
  double y = 0.0;
  double energy = 0.0;
  for (double& v : out) {
    y = 0.9 * y + gauss(rng);
    v = y;
    energy += y * y;
  }
  if (energy > 0.0) {
    const double scale = 0.1 / std::sqrt(energy / static_cast<double>(n));
    for (double& v : out) v *= scale;
  }
  return Waveform(std::move(out), sample_rate);
}

DeskAssetPaths WriteDeskAssets(const fs::path& dir, const DeskAssetOptions& opt) {
  const int rate = opt.sample_rate;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  fs::create_directories(dir / "rir");
  fs::create_directories(dir / "speech");
  fs::create_directories(dir / "noise");
  DeskAssetPaths paths{dir / "rir_catalog.json", dir / "speech_corpus.json",
                       dir / "noise_manifest.json", dir / "activity_patterns.json"};

  static const char* kRooms[] = {"living", "kitchen", "dining", "bedroom"};
  json rirs = json::array();
  for (int h = 0; h < opt.homes; ++h) {
    const int rooms = std::min(opt.rooms_per_home, 4);
    for (int r = 0; r <= rooms; ++r) {
      const std::string room = r < rooms ? kRooms[r] : "bathroom";
      const double rt60 = 0.3 + 0.3 * uni(rng);
      for (int p = 0; p < opt.positions_per_array; ++p) {
        for (int c = 0; c < opt.channels; ++c) {
          const std::string name = "h" + std::to_string(h) + "_" + room + "_p" +
                                   std::to_string(p) + "_c" + std::to_string(c) + ".wav";
          SaveWav(SyntheticRir(rt60, rate, rng), dir / "rir" / name);
          rirs.push_back({{"home_id", "home" + std::to_string(h)},
                          {"room_id", room},
                          {"array_id", "a0"},
                          {"source_position_id", "pos" + std::to_string(p)},
                          {"channel_id", "ch" + std::to_string(c)},
                          {"wav_path", "rir/" + name}});
        }
      }
    }
  }
  WriteJson(paths.rir_catalog, rirs);

  json speakers = json::array();
  for (int g = 0; g < 2; ++g) {
    for (int s = 0; s < opt.speakers_per_gender; ++s) {
      const std::string id = std::string(g == 0 ? "M" : "F") + std::to_string(s);
      const double f0 = g == 0 ? 100.0 + 40.0 * uni(rng) : 180.0 + 60.0 * uni(rng);
      fs::create_directories(dir / "speech" / id);
      json utts = json::array();
      for (int u = 0; u < opt.utterances_per_speaker; ++u) {
        const std::string rel = "speech/" + id + "/u" + std::to_string(u) + ".wav";
        SaveWav(SyntheticSpeech(2.0 + 2.0 * uni(rng), rate, f0, rng), dir / rel);
        utts.push_back(rel);
      }
      speakers.push_back({{"speaker_id", id}, {"gender", g == 0 ? "M" : "F"}, {"utterances", utts}});
    }
  }
  WriteJson(paths.speech_corpus, speakers);

  json noises = json::array();
  for (int i = 0; i < opt.noise_segments; ++i) {
    const std::string rel = "noise/n" + std::to_string(i) + ".wav";
    SaveWav(SyntheticNoise(3.0 + 5.0 * uni(rng), rate, rng), dir / rel);
    noises.push_back({{"segment_id", "n" + std::to_string(i)}, {"wav_path", rel}});
  }
  WriteJson(paths.noise_manifest, noises);

  // Every track spans the midpoint, so n tracks give exactly n-fold overlap.
  json patterns = json::array();
  for (int n = 1; n <= 3; ++n) {
    for (int i = 0; i < opt.patterns_per_count; ++i) {
      Recording rec;
      rec.recording_id = "pat" + std::to_string(n) + "_" + std::to_string(i);
      rec.duration_s = Round2(4.0 + 2.0 * uni(rng));
      const double mid = rec.duration_s / 2.0;
      for (int k = 0; k < n; ++k) {
        DiarizationTrack t;
        t.speaker_id = "S" + std::to_string(k);
        const double a = Round2(0.1 + (mid - 0.6) * uni(rng));
        const double b = Round2(mid + 0.5 + (rec.duration_s - mid - 0.6) * uni(rng));
        if (n == 1) {
          const double gap = Round2(mid + 0.1);
          t.intervals = {{a, Round2(mid - 0.1)}, {gap, b}};
        } else {
          t.intervals = {{a, b}};
        }
        rec.tracks.push_back(std::move(t));
      }
      patterns.push_back(json::parse(DiarizationToJson(rec)));
    }
  }
  WriteJson(paths.activity_patterns, patterns);
  return paths;
}

DatasetInputs LoadDatasetInputs(const DeskAssetPaths& paths) {
  return {LoadRirCatalog(paths.rir_catalog), LoadSpeechCorpus(paths.speech_corpus),
          LoadNoiseManifest(paths.noise_manifest), LoadActivityPatterns(paths.activity_patterns)};
}

}  // namespace speval
