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

#include "speval/segmenter.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "speval/error.h"

namespace speval {

namespace {

using json = nlohmann::json;

// (tick, delta) activity events clipped to [lo, hi).
std::vector<std::pair<std::int64_t, int>> ClippedEvents(
    std::span<const DiarizationTrack> tracks, std::int64_t lo, std::int64_t hi) {
  std::vector<std::pair<std::int64_t, int>> events;
  for (const DiarizationTrack& track : tracks) {
    for (const Interval& iv : track.intervals) {
      const std::int64_t a = std::max(SecondsToTicks(iv.start_s), lo);
      const std::int64_t b = std::min(SecondsToTicks(iv.end_s), hi);
      if (a >= b) continue;
      events.emplace_back(a, +1);
      events.emplace_back(b, -1);
    }
  }
  // Ends sort before starts at the same tick (half-open intervals).
  std::sort(events.begin(), events.end());
  return events;
}

// Prefix count of ticks where at least one speaker is active.
std::vector<std::int64_t> SpeechPrefix(std::span<const DiarizationTrack> tracks,
                                       std::int64_t total_ticks) {
  std::vector<int> diff(static_cast<std::size_t>(total_ticks) + 1, 0);
  for (const DiarizationTrack& track : tracks) {
    for (const Interval& iv : track.intervals) {
      const std::int64_t a = std::clamp<std::int64_t>(SecondsToTicks(iv.start_s), 0, total_ticks);
      const std::int64_t b = std::clamp<std::int64_t>(SecondsToTicks(iv.end_s), 0, total_ticks);
      if (a >= b) continue;
      ++diff[a];
      --diff[b];
    }
  }
  std::vector<std::int64_t> prefix(static_cast<std::size_t>(total_ticks) + 1, 0);
  int active = 0;
  for (std::int64_t t = 0; t < total_ticks; ++t) {
    active += diff[t];
    prefix[t + 1] = prefix[t] + (active > 0 ? 1 : 0);
  }
  return prefix;
}

}  // namespace

std::int64_t SecondsToTicks(double seconds) {
  return static_cast<std::int64_t>(std::llround(seconds / kTickSeconds));
}

double TicksToSeconds(std::int64_t ticks) {
  return static_cast<double>(ticks) * kTickSeconds;
}

void ValidateTrack(const DiarizationTrack& track) {
  std::vector<Interval> sorted = track.intervals;
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval& a, const Interval& b) { return a.start_s < b.start_s; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Interval& iv = sorted[i];
    if (!(iv.start_s >= 0.0)) {
      throw Error(ErrorCode::kParseError,
                  "speaker " + track.speaker_id + ": negative start time");
    }
    if (!(iv.start_s < iv.end_s)) {
      throw Error(ErrorCode::kParseError,
                  "speaker " + track.speaker_id + ": interval start >= end");
    }
    if (i > 0 && SecondsToTicks(iv.start_s) < SecondsToTicks(sorted[i - 1].end_s)) {
      throw Error(ErrorCode::kParseError,
                  "speaker " + track.speaker_id + ": overlapping intervals");
    }
  }
}

int MaxOverlap(std::span<const DiarizationTrack> tracks, double start_s,
               double end_s) {
  const auto events =
      ClippedEvents(tracks, SecondsToTicks(start_s), SecondsToTicks(end_s));
  int active = 0;
  int best = 0;
  for (const auto& [tick, delta] : events) {
    active += delta;
    best = std::max(best, active);
  }
  return best;
}

std::vector<double> OverlapStatistics(std::span<const DiarizationTrack> tracks,
                                      double total_duration_s) {
  const std::int64_t total = SecondsToTicks(total_duration_s);
  std::vector<double> fractions(std::max<std::size_t>(5, tracks.size() + 1), 0.0);
  if (total <= 0) {
    fractions[0] = 1.0;
    return fractions;
  }
  const auto events = ClippedEvents(tracks, 0, total);
  std::vector<std::int64_t> ticks_at(fractions.size(), 0);
  int active = 0;
  std::int64_t cursor = 0;
  for (const auto& [tick, delta] : events) {
    ticks_at[active] += tick - cursor;
    cursor = tick;
    active += delta;
  }
  ticks_at[active] += total - cursor;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    fractions[i] = static_cast<double>(ticks_at[i]) / static_cast<double>(total);
  }
  return fractions;
}

Segment DescribeSegment(std::span<const DiarizationTrack> tracks, double start_s,
                        double end_s) {
  const std::int64_t lo = SecondsToTicks(start_s);
  const std::int64_t hi = SecondsToTicks(end_s);
  const auto events = ClippedEvents(tracks, lo, hi);
  int active = 0;
  int best = 0;
  std::int64_t speech = 0;
  std::int64_t cursor = lo;
  for (const auto& [tick, delta] : events) {
    if (active > 0) speech += tick - cursor;
    cursor = tick;
    active += delta;
    best = std::max(best, active);
  }
  Segment seg;
  seg.start_s = TicksToSeconds(lo);
  seg.end_s = TicksToSeconds(hi);
  seg.max_simultaneous_speakers = best;
  seg.speech_seconds = TicksToSeconds(speech);
  return seg;
}

bool SatisfiesLtCriteria(std::span<const DiarizationTrack> tracks,
                         const Segment& segment, const LtCriteria& criteria) {
  const std::int64_t lo = SecondsToTicks(segment.start_s);
  const std::int64_t hi = SecondsToTicks(segment.end_s);
  const std::int64_t margin = SecondsToTicks(criteria.silent_margin_s);
  const std::int64_t duration = hi - lo;
  if (duration < SecondsToTicks(criteria.min_duration_s) ||
      duration > SecondsToTicks(criteria.max_duration_s)) {
    return false;
  }
  if (DescribeSegment(tracks, segment.start_s, segment.end_s).speech_seconds + 1e-9 <
      criteria.min_speech_s) {
    return false;
  }
  return DescribeSegment(tracks, TicksToSeconds(lo), TicksToSeconds(lo + margin))
                 .speech_seconds == 0.0 &&
         DescribeSegment(tracks, TicksToSeconds(hi - margin), TicksToSeconds(hi))
                 .speech_seconds == 0.0;
}

std::vector<Segment> ExtractLtCandidates(std::span<const DiarizationTrack> tracks,
                                         double audio_duration_s,
                                         const LtCriteria& criteria) {
  const std::int64_t total = SecondsToTicks(audio_duration_s);
  if (total <= 0) return {};
  const std::vector<std::int64_t> prefix = SpeechPrefix(tracks, total);
  auto speech = [&](std::int64_t a, std::int64_t b) { return prefix[b] - prefix[a]; };

  const std::int64_t min_len = SecondsToTicks(criteria.min_duration_s);
  const std::int64_t max_len = SecondsToTicks(criteria.max_duration_s);
  const std::int64_t margin = SecondsToTicks(criteria.silent_margin_s);
  const std::int64_t min_speech = SecondsToTicks(criteria.min_speech_s);
  const std::int64_t step = std::max<std::int64_t>(1, SecondsToTicks(criteria.scan_step_s));

  std::vector<Segment> out;
  std::int64_t start = 0;
  while (start + min_len <= total) {
    std::int64_t found = -1;
    if (speech(start, start + margin) == 0) {
      for (std::int64_t len = std::min(max_len, total - start); len >= min_len; --len) {
        const std::int64_t end = start + len;
        if (speech(end - margin, end) == 0 && speech(start, end) >= min_speech) {
          found = end;
          break;
        }
      }
    }
    if (found < 0) {
      start += step;
      continue;
    }
    out.push_back(DescribeSegment(tracks, TicksToSeconds(start), TicksToSeconds(found)));
    start = found;
  }
  return out;
}

std::vector<TaggedSegment> TagCandidates(const Recording& recording,
                                         const LtCriteria& criteria) {
  std::vector<TaggedSegment> out;
  for (const Segment& seg :
       ExtractLtCandidates(recording.tracks, recording.duration_s, criteria)) {
    TaggedSegment tagged{recording.recording_id, seg, {}};
    double best = -1.0;
    for (const DiarizationTrack& track : recording.tracks) {
      const double s = DescribeSegment(std::span(&track, 1), seg.start_s, seg.end_s)
                           .speech_seconds;
      if (s > best) {
        best = s;
        tagged.tags = track.tags;
      }
    }
    out.push_back(std::move(tagged));
  }
  return out;
}

std::vector<TaggedSegment> BalanceCandidates(std::span<const TaggedSegment> candidates,
                                             std::span<const std::string> keys,
                                             std::size_t per_stratum,
                                             std::uint64_t seed) {
  std::map<std::vector<std::string>, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::vector<std::string> key;
    for (const std::string& k : keys) {
      const auto it = candidates[i].tags.find(k);
      key.push_back(it == candidates[i].tags.end() ? std::string() : it->second);
    }
    strata[key].push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::vector<TaggedSegment> out;
  for (auto& [key, members] : strata) {
    std::shuffle(members.begin(), members.end(), rng);
    const std::size_t take = std::min(per_stratum, members.size());
    for (std::size_t j = 0; j < take; ++j) out.push_back(candidates[members[j]]);
  }
  return out;
}

Recording ParseDiarizationJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  try {
    Recording rec;
    rec.recording_id = doc.at("recording_id").get<std::string>();
    rec.duration_s = doc.at("duration_s").get<double>();
    for (const json& t : doc.at("tracks")) {
      DiarizationTrack track;
      track.speaker_id = t.at("speaker_id").get<std::string>();
      for (const char* key : {"gender", "location", "session"}) {
        if (t.contains(key)) track.tags[key] = t.at(key).get<std::string>();
      }
      for (const json& iv : t.at("intervals")) {
        if (!iv.is_array() || iv.size() != 2) {
          throw Error(ErrorCode::kParseError, "interval must be [start, end]");
        }
        track.intervals.push_back({iv[0].get<double>(), iv[1].get<double>()});
      }
      ValidateTrack(track);
      rec.tracks.push_back(std::move(track));
    }
    return rec;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

Recording LoadDiarization(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileNotFound, path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseDiarizationJson(ss.str());
}

std::string DiarizationToJson(const Recording& recording) {
  json doc;
  doc["recording_id"] = recording.recording_id;
  doc["duration_s"] = recording.duration_s;
  doc["tracks"] = json::array();
  for (const DiarizationTrack& track : recording.tracks) {
    json t;
    t["speaker_id"] = track.speaker_id;
    for (const auto& [k, v] : track.tags) t[k] = v;
    t["intervals"] = json::array();
    for (const Interval& iv : track.intervals) {
      t["intervals"].push_back({iv.start_s, iv.end_s});
    }
    doc["tracks"].push_back(std::move(t));
  }
  return doc.dump(2);
}

}  // namespace speval
