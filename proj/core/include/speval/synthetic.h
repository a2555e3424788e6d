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

#ifndef SPEVAL_SYNTHETIC_H_
#define SPEVAL_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>
#include <random>

#include "speval/audio_io.h"
#include "speval/mixgen.h"

namespace speval {

// Deterministic stand-ins for recorded material, used for demos, tests and
// benchmarks when real corpora are not at hand.

// Voiced speech-like signal: a glottal-like harmonic series with jittered f0,
// two resonances, and 3-5 Hz syllabic amplitude modulation. Peak ~0.5.
Waveform SyntheticSpeech(double duration_s, int sample_rate, double f0_hz,
                         std::mt19937_64& rng);

// Exponentially decaying Gaussian tail after a unit direct path. The energy
// decay is linear in dB with the given RT60.
Waveform SyntheticRir(double rt60_s, int sample_rate, std::mt19937_64& rng,
                      double length_s = 0.0);

// Pinkish (first-order low-passed) stationary noise with RMS ~0.1.
Waveform SyntheticNoise(double duration_s, int sample_rate, std::mt19937_64& rng);

struct DeskAssetOptions {
  int sample_rate = 16000;
  int homes = 2;
  int rooms_per_home = 2;
  int positions_per_array = 3;
  int channels = 2;
  int speakers_per_gender = 4;
  int utterances_per_speaker = 6;
  int noise_segments = 4;
  int patterns_per_count = 6;
  std::uint64_t seed = 1;
};

struct DeskAssetPaths {
  std::filesystem::path rir_catalog;
  std::filesystem::path speech_corpus;
  std::filesystem::path noise_manifest;
  std::filesystem::path activity_patterns;
};

// Writes WAVs and the four manifests under `dir` (one bathroom room per home
// is included so catalog filtering is exercised).
DeskAssetPaths WriteDeskAssets(const std::filesystem::path& dir,
                               const DeskAssetOptions& options = {});

// Loads the four manifests written by WriteDeskAssets.
DatasetInputs LoadDatasetInputs(const DeskAssetPaths& paths);

}  // namespace speval

#endif  // SPEVAL_SYNTHETIC_H_
