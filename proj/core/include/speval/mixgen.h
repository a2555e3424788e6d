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

#ifndef SPEVAL_MIXGEN_H_
#define SPEVAL_MIXGEN_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "speval/audio_io.h"
#include "speval/segmenter.h"

namespace speval {

// Synthetic reverberant noisy-speech mixtures: a recipe (MixturePlan) is
// sampled from catalogs with a single seeded RNG stream, then rendered into
// per-speaker reverberant speech, noise, and their exact float32 sum.

struct RirEntry {
  std::string home_id;
  std::string room_id;
  std::string array_id;
  std::string source_position_id;
  std::string channel_id;
  std::filesystem::path wav_path;

  friend bool operator==(const RirEntry&, const RirEntry&) = default;
};

struct RirCatalog {
  std::vector<RirEntry> entries;
};

enum class Gender { kMale, kFemale };

struct SpeakerEntry {
  std::string speaker_id;
  Gender gender = Gender::kMale;
  std::vector<std::filesystem::path> utterances;
};

struct SpeechCorpus {
  std::vector<SpeakerEntry> speakers;
};

struct NoiseSegment {
  std::string segment_id;
  std::filesystem::path wav_path;
};

struct MixConfig {
  std::array<double, 3> speaker_count_probs = {0.60, 0.35, 0.05};
  double snr_mean_db = 5.0;
  double sigma1_db = 6.7082;  // spread of the per-mixture SNR
  double sigma2_db = 2.0;     // spread of per-speaker SNRs around it
  std::uint64_t seed = 0;
  int sample_rate = 16000;
};

// Throws kInvalidArgument unless the probabilities are >= 0 and sum to 1.
void ValidateMixConfig(const MixConfig& cfg);

struct PlannedSpeaker {
  std::string speaker_id;
  Gender gender = Gender::kMale;
  RirEntry rir;
  std::vector<Interval> activity;  // seconds, relative to mixture start
  double snr_db = 0.0;
};

struct MixturePlan {
  std::string mixture_id;
  int n_speakers = 0;
  std::string pattern_id;
  double duration_s = 0.0;
  std::vector<PlannedSpeaker> speakers;
  double global_snr_db = 0.0;
  std::string noise_segment_id;
  // Seeds rendering-time choices (utterance order, noise crop offset).
  std::uint64_t render_seed = 0;
};

struct MixtureRecord {
  Waveform mixture;
  std::vector<Waveform> reverberant_speech;
  Waveform noise;
  Waveform clean_reference;
  MixturePlan plan;
  std::size_t noise_offset = 0;
  bool noise_looped = false;
  double peak_scale = 1.0;
};

// Pre-indexed planning inputs. Bathroom rooms are removed on construction and
// activity patterns are bucketed by speaker count (a pattern qualifies for n
// speakers when it has n non-empty tracks and all n overlap at some instant).
class PlanSampler {
 public:
  PlanSampler(MixConfig cfg, RirCatalog catalog, std::vector<Recording> patterns,
              SpeechCorpus corpus, std::vector<NoiseSegment> noises);

  // Draws the next plan from `rng`. Throws kCatalogTooSmall when no
  // home/room/array offers n distinct source positions on a common channel,
  // kNoActivityPattern when no pattern has n speakers.
  MixturePlan Sample(std::mt19937_64& rng) const;

  const MixConfig& config() const { return cfg_; }
  const RirCatalog& catalog() const { return catalog_; }

 private:
  struct Group;  // one (home, room, array) with its positions
  std::vector<const Group*> FeasibleGroups(int n) const;

  MixConfig cfg_;
  RirCatalog catalog_;
  std::vector<Recording> patterns_;
  SpeechCorpus corpus_;
  std::vector<NoiseSegment> noises_;
  std::array<std::vector<std::size_t>, 3> patterns_by_count_;
  std::vector<std::size_t> male_speakers_;
  std::vector<std::size_t> female_speakers_;
  std::vector<std::shared_ptr<Group>> groups_;
};

// True when the (home, room) is a bathroom.
bool IsBathroom(const RirEntry& entry);

// Drops bathroom entries and checks every (home, room, array) group has at
// least `min_positions` distinct source positions (kCatalogTooSmall).
RirCatalog BuildRirCatalog(std::vector<RirEntry> entries, std::size_t min_positions = 3);

// Places utterances on the activity intervals: each interval is filled by
// concatenating unused utterances in order, trimming the last one at the
// interval end. Output has `length` samples and is zero outside the pattern.
// Throws kInsufficientMaterial.
Waveform FitUtterances(std::span<const Interval> pattern,
                       std::span<const Waveform> utterances, std::size_t length,
                       int sample_rate);

// Loops (50 ms crossfade) or crops `noise` to `length` samples.
Waveform FitNoise(const Waveform& noise, std::size_t length, std::mt19937_64& rng,
                  std::size_t* offset = nullptr, bool* looped = nullptr);

// Convolves, scales each speaker to its planned SNR measured over its active
// samples, and sums. dry_speech and rirs are indexed like plan.speakers.
// Throws kSilentComponent when speech or noise has no power on a support.
MixtureRecord RenderMixture(const MixturePlan& plan, std::span<const Waveform> dry_speech,
                            std::span<const Waveform> rirs, const Waveform& noise);

// Per-speaker SNR (dB) measured on the emitted components.
double MeasuredSpeakerSnrDb(const Waveform& speech, const Waveform& noise,
                            std::span<const Interval> activity);

// Sample-index ranges [begin, end) of the intervals, clipped to `length`.
std::vector<std::pair<std::size_t, std::size_t>> IntervalsToSamples(
    std::span<const Interval> intervals, int sample_rate, std::size_t length);

struct DatasetInputs {
  RirCatalog catalog;
  SpeechCorpus corpus;
  std::vector<NoiseSegment> noises;
  std::vector<Recording> patterns;
};

struct ManifestEntry {
  std::string mixture_id;
  std::string subset;  // max simultaneous speakers, "1".."3"
  std::filesystem::path dir;
  double global_snr_db = 0.0;
  std::vector<double> per_speaker_snr_db;
  double mixture_snr_db = 0.0;
};

// Samples `count` plans sequentially from cfg.seed, renders them on
// `threads` workers, and writes <out_dir>/<mixture_id>/{mix,clean,noise,
// speech_k}.wav + meta.json plus <out_dir>/manifest.jsonl.
std::vector<ManifestEntry> GenerateDataset(const MixConfig& cfg, const DatasetInputs& inputs,
                                           std::size_t count,
                                           const std::filesystem::path& out_dir,
                                           unsigned threads = 0);

// Catalog loaders (relative wav paths resolve against the manifest's folder).
RirCatalog LoadRirCatalog(const std::filesystem::path& path);
SpeechCorpus LoadSpeechCorpus(const std::filesystem::path& path);
std::vector<NoiseSegment> LoadNoiseManifest(const std::filesystem::path& path);
// Accepts a single diarization JSON, a JSON array of them, or a directory of
// *.json files.
std::vector<Recording> LoadActivityPatterns(const std::filesystem::path& path);

}  // namespace speval

#endif  // SPEVAL_MIXGEN_H_
