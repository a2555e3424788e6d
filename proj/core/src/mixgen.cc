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
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "speval/error.h"
#include "speval/fft.h"
#include "parallel.h"

namespace speval {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr double kCrossfadeSeconds = 0.05;
constexpr double kPeakCeiling = 0.99;

std::string ToLower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string GenderName(Gender g) { return g == Gender::kMale ? "M" : "F"; }

Gender ParseGender(const std::string& raw) {
  const std::string g = ToLower(raw);
  if (g == "m" || g == "male") return Gender::kMale;
  if (g == "f" || g == "female") return Gender::kFemale;
  throw Error(ErrorCode::kParseError, "unknown gender '" + raw + "'");
}

template <typename T>
const T& PickUniform(const std::vector<T>& v, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
  return v[d(rng)];
}

json ReadJsonFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileNotFound, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

fs::path Resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

const json& EntryList(const json& doc, const char* key) {
  if (doc.is_array()) return doc;
  if (doc.is_object() && doc.contains(key) && doc[key].is_array()) return doc[key];
  throw Error(ErrorCode::kParseError, std::string("expected a JSON list of ") + key);
}

std::string Field(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw Error(ErrorCode::kParseError, std::string("missing field '") + key + "'");
  }
  const json& v = j[key];
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw Error(ErrorCode::kParseError, std::string("field '") + key + "' must be a string");
}

// Number of non-empty tracks if all of them are active together somewhere.
int PatternSpeakerCount(const Recording& r) {
  std::vector<DiarizationTrack> active;
  for (const auto& t : r.tracks) {
    if (!t.intervals.empty()) active.push_back(t);
  }
  if (active.empty()) return 0;
  const int overlap = MaxOverlap(active, 0.0, r.duration_s);
  return overlap == static_cast<int>(active.size()) ? overlap : 0;
}

Waveform LoadAtRate(const fs::path& path, int rate) {
  Waveform w = LoadWav(path);
  return w.sample_rate() == rate ? w : Resample(w, rate);
}

}  // namespace

void ValidateMixConfig(const MixConfig& cfg) {
  double sum = 0.0;
  for (double p : cfg.speaker_count_probs) {
    if (!(p >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "speaker-count probabilities must be >= 0");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "speaker-count probabilities must sum to 1");
  }
  if (!(cfg.sigma1_db >= 0.0) || !(cfg.sigma2_db >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "SNR spreads must be >= 0");
  }
  if (cfg.sample_rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
}

bool IsBathroom(const RirEntry& entry) {
  return ToLower(entry.room_id).find("bathroom") != std::string::npos;
}

RirCatalog BuildRirCatalog(std::vector<RirEntry> entries, std::size_t min_positions) {
  std::erase_if(entries, IsBathroom);
  std::map<std::tuple<std::string, std::string, std::string>, std::set<std::string>> groups;
  for (const auto& e : entries) {
    groups[{e.home_id, e.room_id, e.array_id}].insert(e.source_position_id);
  }
  for (const auto& [key, positions] : groups) {
    if (positions.size() < min_positions) {
      throw Error(ErrorCode::kCatalogTooSmall,
                  "group " + std::get<0>(key) + "/" + std::get<1>(key) + "/" +
                      std::get<2>(key) + " has " + std::to_string(positions.size()) +
                      " source positions");
    }
  }
  return RirCatalog{std::move(entries)};
}

struct PlanSampler::Group {
  std::string home;
  std::string room;
  std::string array;
  // position id -> channel id -> catalog entry index
  std::vector<std::pair<std::string, std::map<std::string, std::size_t>>> positions;
};

PlanSampler::PlanSampler(MixConfig cfg, RirCatalog catalog, std::vector<Recording> patterns,
                         SpeechCorpus corpus, std::vector<NoiseSegment> noises)
    : cfg_(cfg),
      catalog_(std::move(catalog)),
      patterns_(std::move(patterns)),
      corpus_(std::move(corpus)),
      noises_(std::move(noises)) {
  ValidateMixConfig(cfg_);
  std::erase_if(catalog_.entries, IsBathroom);
  if (catalog_.entries.empty()) {
    throw Error(ErrorCode::kCatalogTooSmall, "RIR catalog is empty");
  }
  std::map<std::tuple<std::string, std::string, std::string>, std::shared_ptr<Group>> by_key;
  for (std::size_t i = 0; i < catalog_.entries.size(); ++i) {
    const RirEntry& e = catalog_.entries[i];
    auto& g = by_key[{e.home_id, e.room_id, e.array_id}];
    if (!g) {
      g = std::make_shared<Group>();
      g->home = e.home_id;
      g->room = e.room_id;
      g->array = e.array_id;
      groups_.push_back(g);
    }
    auto it = std::find_if(g->positions.begin(), g->positions.end(),
                           [&](const auto& p) { return p.first == e.source_position_id; });
    if (it == g->positions.end()) {
      g->positions.push_back({e.source_position_id, {}});
      it = std::prev(g->positions.end());
    }
    it->second.emplace(e.channel_id, i);
  }
  for (std::size_t i = 0; i < patterns_.size(); ++i) {
    const int n = PatternSpeakerCount(patterns_[i]);
    if (n >= 1 && n <= 3) patterns_by_count_[n - 1].push_back(i);
  }
  for (std::size_t i = 0; i < corpus_.speakers.size(); ++i) {
    (corpus_.speakers[i].gender == Gender::kMale ? male_speakers_ : female_speakers_)
        .push_back(i);
  }
  if (noises_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "noise manifest is empty");
  }
}

std::vector<const PlanSampler::Group*> PlanSampler::FeasibleGroups(int n) const {
  std::vector<const Group*> out;
  for (const auto& g : groups_) {
    if (static_cast<int>(g->positions.size()) >= n) out.push_back(g.get());
  }
  return out;
}

MixturePlan PlanSampler::Sample(std::mt19937_64& rng) const {
  MixturePlan plan;
  std::discrete_distribution<int> count_dist(cfg_.speaker_count_probs.begin(),
                                             cfg_.speaker_count_probs.end());
  const int n = count_dist(rng) + 1;
  plan.n_speakers = n;

  const auto& eligible = patterns_by_count_[n - 1];
  if (eligible.empty()) {
    throw Error(ErrorCode::kNoActivityPattern,
                "no activity pattern with " + std::to_string(n) + " speakers");
  }
  const Recording& pattern = patterns_[PickUniform(eligible, rng)];
  plan.pattern_id = pattern.recording_id;
  plan.duration_s = pattern.duration_s;

  // home -> room -> array, each uniform over the options that can host n.
  const auto groups = FeasibleGroups(n);
  if (groups.empty()) {
    throw Error(ErrorCode::kCatalogTooSmall,
                "no array with " + std::to_string(n) + " source positions");
  }
  std::vector<std::string> homes;
  for (const Group* g : groups) {
    if (std::find(homes.begin(), homes.end(), g->home) == homes.end()) homes.push_back(g->home);
  }
  const std::string home = PickUniform(homes, rng);
  std::vector<std::string> rooms;
  for (const Group* g : groups) {
    if (g->home == home && std::find(rooms.begin(), rooms.end(), g->room) == rooms.end()) {
      rooms.push_back(g->room);
    }
  }
  const std::string room = PickUniform(rooms, rng);
  std::vector<const Group*> arrays;
  for (const Group* g : groups) {
    if (g->home == home && g->room == room) arrays.push_back(g);
  }
  const Group& group = *PickUniform(arrays, rng);

  std::vector<std::size_t> pos_idx(group.positions.size());
  std::iota(pos_idx.begin(), pos_idx.end(), 0);
  for (int k = 0; k < n; ++k) {  // partial Fisher-Yates
    std::uniform_int_distribution<std::size_t> d(k, pos_idx.size() - 1);
    std::swap(pos_idx[k], pos_idx[d(rng)]);
  }
  pos_idx.resize(n);

  std::vector<std::string> channels;
  for (const auto& [ch, idx] : group.positions[pos_idx[0]].second) {
    bool everywhere = true;
    for (int k = 1; k < n; ++k) {
      everywhere = everywhere && group.positions[pos_idx[k]].second.contains(ch);
    }
    if (everywhere) channels.push_back(ch);
  }
  if (channels.empty()) {
    throw Error(ErrorCode::kCatalogTooSmall, "selected positions share no channel");
  }
  const std::string channel = PickUniform(channels, rng);

  std::vector<std::size_t> males = male_speakers_;
  std::vector<std::size_t> females = female_speakers_;
  std::bernoulli_distribution coin(0.5);
  std::vector<const DiarizationTrack*> tracks;
  for (const auto& t : pattern.tracks) {
    if (!t.intervals.empty()) tracks.push_back(&t);
  }
  plan.speakers.resize(n);
  for (int k = 0; k < n; ++k) {
    PlannedSpeaker& sp = plan.speakers[k];
    const bool male = coin(rng);
    std::vector<std::size_t>* pool = male ? &males : &females;
    if (pool->empty()) pool = male ? &females : &males;
    if (pool->empty()) {
      throw Error(ErrorCode::kInsufficientMaterial, "speech corpus has too few speakers");
    }
    std::uniform_int_distribution<std::size_t> d(0, pool->size() - 1);
    const std::size_t pick = d(rng);
    const SpeakerEntry& speaker = corpus_.speakers[(*pool)[pick]];
    pool->erase(pool->begin() + static_cast<std::ptrdiff_t>(pick));
    sp.speaker_id = speaker.speaker_id;
    sp.gender = speaker.gender;
    sp.rir = catalog_.entries[group.positions[pos_idx[k]].second.at(channel)];
    sp.activity = tracks[k]->intervals;
  }

  std::normal_distribution<double> global(cfg_.snr_mean_db, cfg_.sigma1_db);
  plan.global_snr_db = global(rng);
  std::normal_distribution<double> local(plan.global_snr_db, cfg_.sigma2_db);
  for (auto& sp : plan.speakers) sp.snr_db = local(rng);

  plan.noise_segment_id = PickUniform(noises_, rng).segment_id;
  plan.render_seed = rng();
  return plan;
}

std::vector<std::pair<std::size_t, std::size_t>> IntervalsToSamples(
    std::span<const Interval> intervals, int sample_rate, std::size_t length) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const Interval& iv : intervals) {
    const auto a = static_cast<std::size_t>(
        std::max<long long>(0, std::llround(iv.start_s * sample_rate)));
    const auto b = std::min<std::size_t>(
        length, static_cast<std::size_t>(std::max<long long>(0, std::llround(iv.end_s * sample_rate))));
    if (a < b) out.emplace_back(a, b);
  }
  return out;
}

Waveform FitUtterances(std::span<const Interval> pattern, std::span<const Waveform> utterances,
                       std::size_t length, int sample_rate) {
  const auto ranges = IntervalsToSamples(pattern, sample_rate, length);
  std::size_t needed = 0;
  for (const auto& [a, b] : ranges) needed += b - a;
  std::size_t available = 0;
  for (const Waveform& u : utterances) {
    if (u.sample_rate() != sample_rate) {
      throw Error(ErrorCode::kInvalidArgument, "utterance sample rate mismatch");
    }
    available += u.size();
  }
  if (available < needed) {
    throw Error(ErrorCode::kInsufficientMaterial,
                "utterances cover " + std::to_string(available) + " of " +
                    std::to_string(needed) + " samples");
  }
  std::vector<double> out(length, 0.0);
  std::size_t next = 0;
  for (const auto& [a, b] : ranges) {
    std::size_t pos = a;
    while (pos < b) {
      if (next >= utterances.size()) {
        throw Error(ErrorCode::kInsufficientMaterial, "ran out of utterances");
      }
      const auto u = utterances[next++].samples();
      const std::size_t take = std::min(u.size(), b - pos);
      std::copy_n(u.begin(), take, out.begin() + static_cast<std::ptrdiff_t>(pos));
      pos += take;
    }
  }
  return Waveform(std::move(out), sample_rate);
}

Waveform FitNoise(const Waveform& noise, std::size_t length, std::mt19937_64& rng,
                  std::size_t* offset, bool* looped) {
  if (noise.empty()) throw Error(ErrorCode::kSilentComponent, "noise segment is empty");
  const auto src = noise.samples();
  std::vector<double> out(length, 0.0);
  if (src.size() >= length) {
    std::uniform_int_distribution<std::size_t> d(0, src.size() - length);
    const std::size_t start = d(rng);
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(start), length, out.begin());
    if (offset) *offset = start;
    if (looped) *looped = false;
    return Waveform(std::move(out), noise.sample_rate());
  }
  const std::size_t fade = std::min<std::size_t>(
      static_cast<std::size_t>(std::llround(kCrossfadeSeconds * noise.sample_rate())),
      src.size() / 2);
  std::size_t end = std::min(src.size(), length);
  std::copy_n(src.begin(), end, out.begin());
  while (end < length) {
    const std::size_t start = end - fade;
    for (std::size_t i = 0; i < src.size() && start + i < length; ++i) {
      if (i < fade) {
        const double w = (i + 0.5) / static_cast<double>(fade);
        out[start + i] = out[start + i] * (1.0 - w) + src[i] * w;
      } else {
        out[start + i] = src[i];
      }
    }
    end = std::min(length, start + src.size());
  }
  if (offset) *offset = 0;
  if (looped) *looped = true;
  return Waveform(std::move(out), noise.sample_rate());
}

double MeasuredSpeakerSnrDb(const Waveform& speech, const Waveform& noise,
                            std::span<const Interval> activity) {
  double ps = 0.0;
  double pn = 0.0;
  for (const auto& [a, b] : IntervalsToSamples(activity, speech.sample_rate(),
                                               std::min(speech.size(), noise.size()))) {
    for (std::size_t i = a; i < b; ++i) {
      ps += speech[i] * speech[i];
      pn += noise[i] * noise[i];
    }
  }
  return 10.0 * std::log10(ps / pn);
}

MixtureRecord RenderMixture(const MixturePlan& plan, std::span<const Waveform> dry_speech,
                            std::span<const Waveform> rirs, const Waveform& noise) {
  const std::size_t n = plan.speakers.size();
  if (dry_speech.size() != n || rirs.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "one dry signal and one RIR per speaker required");
  }
  const int rate = noise.sample_rate();
  for (std::size_t k = 0; k < n; ++k) {
    if (dry_speech[k].sample_rate() != rate || rirs[k].sample_rate() != rate) {
      throw Error(ErrorCode::kInvalidArgument, "sample rates differ between components");
    }
  }
  const auto length = static_cast<std::size_t>(std::llround(plan.duration_s * rate));

  MixtureRecord rec;
  rec.plan = plan;
  std::mt19937_64 noise_rng(plan.render_seed ^ 0x6e6f697365ULL);
  Waveform fitted = FitNoise(noise, length, noise_rng, &rec.noise_offset, &rec.noise_looped);
  std::vector<double> nz = std::move(fitted).TakeSamples();

  std::vector<std::vector<double>> speech(n);
  for (std::size_t k = 0; k < n; ++k) {
    speech[k] = FftConvolve(dry_speech[k].samples(), rirs[k].samples());
    speech[k].resize(length, 0.0);
    const auto support = IntervalsToSamples(plan.speakers[k].activity, rate, length);
    double ps = 0.0;
    double pn = 0.0;
    for (const auto& [a, b] : support) {
      for (std::size_t i = a; i < b; ++i) {
        ps += speech[k][i] * speech[k][i];
        pn += nz[i] * nz[i];
      }
    }
    if (!(ps > 0.0)) {
      throw Error(ErrorCode::kSilentComponent,
                  "speaker " + plan.speakers[k].speaker_id + " is silent on its support");
    }
    if (!(pn > 0.0)) {
      throw Error(ErrorCode::kSilentComponent, "noise is silent on a speaker's support");
    }
    const double gain = std::sqrt(pn / ps * std::pow(10.0, plan.speakers[k].snr_db / 10.0));
    for (double& v : speech[k]) v *= gain;
  }

  // Common rescale keeps every SNR and avoids clipping on save.
  double peak = 0.0;
  for (std::size_t i = 0; i < length; ++i) {
    double clean_sum = 0.0;
    peak = std::max(peak, std::abs(nz[i]));
    for (std::size_t k = 0; k < n; ++k) {
      clean_sum += speech[k][i];
      peak = std::max(peak, std::abs(speech[k][i]));
    }
    // Speech and noise can cancel, so clean may peak above the mixture.
    peak = std::max({peak, std::abs(clean_sum), std::abs(clean_sum + nz[i])});
  }
  rec.peak_scale = peak > kPeakCeiling ? kPeakCeiling / peak : 1.0;

  // Quantize components to float32 and sum in float, in a fixed order, so the
  // written component files add up to the written mixture exactly.
  std::vector<float> clean(length, 0.0f);
  rec.reverberant_speech.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> q(length);
    for (std::size_t i = 0; i < length; ++i) {
      const float v = static_cast<float>(speech[k][i] * rec.peak_scale);
      q[i] = v;
      clean[i] = k == 0 ? v : clean[i] + v;
    }
    rec.reverberant_speech.emplace_back(std::move(q), rate);
  }
  std::vector<double> noise_q(length), clean_d(length), mix(length);
  for (std::size_t i = 0; i < length; ++i) {
    const float v = static_cast<float>(nz[i] * rec.peak_scale);
    noise_q[i] = v;
    clean_d[i] = clean[i];
    mix[i] = static_cast<float>(clean[i] + v);
  }
  rec.noise = Waveform(std::move(noise_q), rate);
  rec.clean_reference = Waveform(std::move(clean_d), rate);
  rec.mixture = Waveform(std::move(mix), rate);
  return rec;
}

namespace {

json PlanToJson(const MixturePlan& plan) {
  json speakers = json::array();
  for (const auto& sp : plan.speakers) {
    json activity = json::array();
    for (const auto& iv : sp.activity) activity.push_back({iv.start_s, iv.end_s});
    speakers.push_back({{"speaker_id", sp.speaker_id},
                        {"gender", GenderName(sp.gender)},
                        {"rir",
                         {{"home_id", sp.rir.home_id},
                          {"room_id", sp.rir.room_id},
                          {"array_id", sp.rir.array_id},
                          {"source_position_id", sp.rir.source_position_id},
                          {"channel_id", sp.rir.channel_id}}},
                        {"activity", activity},
                        {"snr_db", sp.snr_db}});
  }
  return {{"mixture_id", plan.mixture_id},
          {"n_speakers", plan.n_speakers},
          {"pattern_id", plan.pattern_id},
          {"duration_s", plan.duration_s},
          {"global_snr_db", plan.global_snr_db},
          {"noise_segment_id", plan.noise_segment_id},
          {"render_seed", plan.render_seed},
          {"speakers", speakers}};
}

struct RenderContext {
  const MixConfig* cfg;
  std::unordered_map<std::string, const SpeakerEntry*> speakers;
  std::unordered_map<std::string, const NoiseSegment*> noises;
};

Waveform DrySpeech(const RenderContext& ctx, const MixturePlan& plan, std::size_t k,
                   std::size_t length) {
  const PlannedSpeaker& sp = plan.speakers[k];
  const SpeakerEntry& entry = *ctx.speakers.at(sp.speaker_id);
  const int rate = ctx.cfg->sample_rate;
  std::vector<std::size_t> order(entry.utterances.size());
  std::iota(order.begin(), order.end(), 0);
  std::seed_seq seq{static_cast<std::uint32_t>(plan.render_seed),
                    static_cast<std::uint32_t>(plan.render_seed >> 32),
                    static_cast<std::uint32_t>(k)};
  std::mt19937_64 rng(seq);
  std::shuffle(order.begin(), order.end(), rng);

  const auto ranges = IntervalsToSamples(sp.activity, rate, length);
  std::size_t needed = 0;
  for (const auto& [a, b] : ranges) needed += b - a;
  std::vector<Waveform> loaded;
  std::size_t have = 0;
  for (std::size_t i = 0;; ++i) {
    if (have >= needed) {
      try {
        return FitUtterances(sp.activity, loaded, length, rate);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kInsufficientMaterial || i >= order.size()) throw;
      }
    }
    if (i >= order.size()) {
      throw Error(ErrorCode::kInsufficientMaterial,
                  "speaker " + sp.speaker_id + " lacks material for pattern " + plan.pattern_id);
    }
    loaded.push_back(LoadAtRate(entry.utterances[order[i]], rate));
    have += loaded.back().size();
  }
}

ManifestEntry RenderAndWrite(const RenderContext& ctx, const MixturePlan& plan,
                             const fs::path& out_dir) {
  const int rate = ctx.cfg->sample_rate;
  const auto length = static_cast<std::size_t>(std::llround(plan.duration_s * rate));
  std::vector<Waveform> dry;
  std::vector<Waveform> rirs;
  for (std::size_t k = 0; k < plan.speakers.size(); ++k) {
    dry.push_back(DrySpeech(ctx, plan, k, length));
    rirs.push_back(LoadAtRate(plan.speakers[k].rir.wav_path, rate));
  }
  const Waveform noise = LoadAtRate(ctx.noises.at(plan.noise_segment_id)->wav_path, rate);
  MixtureRecord rec = RenderMixture(plan, dry, rirs, noise);

  const fs::path dir = out_dir / plan.mixture_id;
  fs::create_directories(dir);
  SaveWav(rec.mixture, dir / "mix.wav");
  SaveWav(rec.clean_reference, dir / "clean.wav");
  SaveWav(rec.noise, dir / "noise.wav");
  json speech_files = json::array();
  std::vector<double> measured;
  for (std::size_t k = 0; k < rec.reverberant_speech.size(); ++k) {
    const std::string name = "speech_" + std::to_string(k) + ".wav";
    SaveWav(rec.reverberant_speech[k], dir / name);
    speech_files.push_back(plan.mixture_id + "/" + name);
    measured.push_back(
        MeasuredSpeakerSnrDb(rec.reverberant_speech[k], rec.noise, plan.speakers[k].activity));
  }

  double ec = 0.0, en = 0.0, dot = 0.0;
  for (std::size_t i = 0; i < length; ++i) {
    ec += rec.clean_reference[i] * rec.clean_reference[i];
    en += rec.noise[i] * rec.noise[i];
    dot += rec.clean_reference[i] * rec.noise[i];
  }
  ManifestEntry entry;
  entry.mixture_id = plan.mixture_id;
  entry.dir = dir;
  entry.global_snr_db = plan.global_snr_db;
  for (const auto& sp : plan.speakers) entry.per_speaker_snr_db.push_back(sp.snr_db);
  entry.mixture_snr_db = 10.0 * std::log10(ec / en);
  std::vector<DiarizationTrack> tracks;
  for (const auto& sp : plan.speakers) tracks.push_back({sp.speaker_id, sp.activity, {}});
  entry.subset = std::to_string(MaxOverlap(tracks, 0.0, plan.duration_s));

  json meta = PlanToJson(plan);
  meta["subset"] = entry.subset;
  meta["sample_rate"] = rate;
  meta["noise_offset"] = rec.noise_offset;
  meta["noise_looped"] = rec.noise_looped;
  meta["peak_scale"] = rec.peak_scale;
  meta["measured_snr_db"] = measured;
  meta["clean_energy"] = ec;
  meta["noise_energy"] = en;
  meta["clean_noise_dot"] = dot;
  meta["mixture_snr_db"] = entry.mixture_snr_db;
  std::ofstream(dir / "meta.json") << meta.dump(2) << '\n';
  return entry;
}

}  // namespace

std::vector<ManifestEntry> GenerateDataset(const MixConfig& cfg, const DatasetInputs& inputs,
                                           std::size_t count, const fs::path& out_dir,
                                           unsigned threads) {
  fs::create_directories(out_dir);
  std::vector<MixturePlan> plans;
  if (count > 0) {
    PlanSampler sampler(cfg, inputs.catalog, inputs.patterns, inputs.corpus, inputs.noises);
    std::mt19937_64 rng(cfg.seed);
    char id[32];
    for (std::size_t i = 0; i < count; ++i) {
      plans.push_back(sampler.Sample(rng));
      std::snprintf(id, sizeof(id), "mix_%05zu", i);
      plans.back().mixture_id = id;
    }
  }

  RenderContext ctx{&cfg, {}, {}};
  for (const auto& s : inputs.corpus.speakers) ctx.speakers[s.speaker_id] = &s;
  for (const auto& s : inputs.noises) ctx.noises[s.segment_id] = &s;

  std::vector<ManifestEntry> entries(plans.size());
  internal::ParallelFor(plans.size(), threads, [&](std::size_t i) {
    entries[i] = RenderAndWrite(ctx, plans[i], out_dir);
  });

  std::ofstream manifest(out_dir / "manifest.jsonl");
  if (!manifest) throw Error(ErrorCode::kIoError, "cannot write manifest in " + out_dir.string());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    json speech = json::array();
    for (std::size_t k = 0; k < plans[i].speakers.size(); ++k) {
      speech.push_back(e.mixture_id + "/speech_" + std::to_string(k) + ".wav");
    }
    json line = {{"sample_id", e.mixture_id},
                 {"subset", e.subset},
                 {"mixture", e.mixture_id + "/mix.wav"},
                 {"reference", e.mixture_id + "/clean.wav"},
                 {"noise", e.mixture_id + "/noise.wav"},
                 {"speech", speech},
                 {"n_speakers", plans[i].n_speakers},
                 {"global_snr_db", e.global_snr_db},
                 {"per_speaker_snr_db", e.per_speaker_snr_db},
                 {"mixture_snr_db", e.mixture_snr_db}};
    manifest << line.dump() << '\n';
  }
  return entries;
}

RirCatalog LoadRirCatalog(const fs::path& path) {
  const json doc = ReadJsonFile(path);
  const fs::path base = path.parent_path();
  std::vector<RirEntry> entries;
  for (const json& j : EntryList(doc, "entries")) {
    entries.push_back({Field(j, "home_id"), Field(j, "room_id"), Field(j, "array_id"),
                       Field(j, "source_position_id"), Field(j, "channel_id"),
                       Resolve(base, Field(j, "wav_path"))});
  }
  return BuildRirCatalog(std::move(entries));
}

SpeechCorpus LoadSpeechCorpus(const fs::path& path) {
  const json doc = ReadJsonFile(path);
  const fs::path base = path.parent_path();
  SpeechCorpus corpus;
  for (const json& j : EntryList(doc, "speakers")) {
    SpeakerEntry s;
    s.speaker_id = Field(j, "speaker_id");
    s.gender = ParseGender(Field(j, "gender"));
    const char* key = j.contains("utterances") ? "utterances" : "wav_paths";
    if (!j.contains(key) || !j[key].is_array()) {
      throw Error(ErrorCode::kParseError, "speaker " + s.speaker_id + " has no utterances");
    }
    for (const json& u : j[key]) s.utterances.push_back(Resolve(base, u.get<std::string>()));
    corpus.speakers.push_back(std::move(s));
  }
  return corpus;
}

std::vector<NoiseSegment> LoadNoiseManifest(const fs::path& path) {
  const json doc = ReadJsonFile(path);
  const fs::path base = path.parent_path();
  std::vector<NoiseSegment> out;
  for (const json& j : EntryList(doc, "segments")) {
    out.push_back({Field(j, "segment_id"), Resolve(base, Field(j, "wav_path"))});
  }
  return out;
}

std::vector<Recording> LoadActivityPatterns(const fs::path& path) {
  std::vector<Recording> out;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(path)) {
      if (e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) out.push_back(LoadDiarization(f));
    return out;
  }
  const json doc = ReadJsonFile(path);
  if (doc.is_array()) {
    for (const json& j : doc) out.push_back(ParseDiarizationJson(j.dump()));
  } else {
    out.push_back(ParseDiarizationJson(doc.dump()));
  }
  return out;
}

}  // namespace speval
