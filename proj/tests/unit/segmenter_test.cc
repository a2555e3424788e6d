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
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "speval/error.h"

namespace speval {
namespace {

// Per-tick counting at 0.01 s, straight from the half-open definition.
int BruteForceMaxOverlap(const std::vector<DiarizationTrack>& tracks, double start_s, double end_s) {
  const std::int64_t a = SecondsToTicks(start_s);
  const std::int64_t b = SecondsToTicks(end_s);
  int best = 0;
  for (std::int64_t t = a; t < b; ++t) {
    int active = 0;
    for (const auto& tr : tracks) {
      for (const auto& iv : tr.intervals) {
        if (SecondsToTicks(iv.start_s) <= t && t < SecondsToTicks(iv.end_s)) {
          ++active;
          break;
        }
      }
    }
    best = std::max(best, active);
  }
  return best;
}

double BruteForceSpeech(const std::vector<DiarizationTrack>& tracks, double start_s, double end_s) {
  std::int64_t n = 0;
  for (std::int64_t t = SecondsToTicks(start_s); t < SecondsToTicks(end_s); ++t) {
    for (const auto& tr : tracks) {
      bool on = false;
      for (const auto& iv : tr.intervals) on |= SecondsToTicks(iv.start_s) <= t && t < SecondsToTicks(iv.end_s);
      if (on) {
        ++n;
        break;
      }
    }
  }
  return TicksToSeconds(n);
}

std::vector<DiarizationTrack> RandomSchedule(std::mt19937_64& rng, int n_tracks, double duration) {
  std::uniform_int_distribution<int> gap(0, 300);
  std::uniform_int_distribution<int> len(1, 400);
  std::vector<DiarizationTrack> tracks(n_tracks);
  for (int k = 0; k < n_tracks; ++k) {
    tracks[k].speaker_id = "spk" + std::to_string(k);
    std::int64_t t = gap(rng);
    const std::int64_t end = SecondsToTicks(duration);
    while (t < end) {
      const std::int64_t e = std::min<std::int64_t>(end, t + len(rng));
      tracks[k].intervals.push_back({TicksToSeconds(t), TicksToSeconds(e)});
      t = e + 1 + gap(rng);
    }
  }
  return tracks;
}

TEST(MaxOverlapTest, Basics) {
  EXPECT_EQ(MaxOverlap({}, 0.0, 3.0), 0);
  std::vector<DiarizationTrack> t = {{"a", {{0.0, 2.0}}, {}}, {"b", {{1.0, 3.0}}, {}}};
  EXPECT_EQ(MaxOverlap(t, 0.0, 3.0), 2);
  EXPECT_EQ(MaxOverlap(t, 2.0, 3.0), 1);  // half-open: a ends at 2.0
  EXPECT_EQ(MaxOverlap(t, 0.0, 1.0), 1);
}

TEST(MaxOverlapTest, MatchesBruteForceOnRandomSchedules) {
  std::mt19937_64 rng(1770);
  std::uniform_real_distribution<double> pos(0.0, 20.0);
  for (int iter = 0; iter < 300; ++iter) {
    const auto tracks = RandomSchedule(rng, 4, 20.0);
    double a = std::round(pos(rng) * 100) / 100;
    double b = std::round(pos(rng) * 100) / 100;
    if (a > b) std::swap(a, b);
    if (a == b) b += 0.01;
    ASSERT_EQ(MaxOverlap(tracks, a, b), BruteForceMaxOverlap(tracks, a, b)) << iter;
    const Segment s = DescribeSegment(tracks, a, b);
    EXPECT_NEAR(s.speech_seconds, BruteForceSpeech(tracks, a, b), 1e-9);
    EXPECT_LE(s.speech_seconds, s.duration_s() + 1e-12);
  }
}

TEST(OverlapStatisticsTest, HalfActive) {
  std::vector<DiarizationTrack> t = {{"a", {{0.0, 5.0}}, {}}};
  const auto f = OverlapStatistics(t, 10.0);
  ASSERT_GE(f.size(), 5u);
  EXPECT_NEAR(f[0], 0.5, 1e-12);
  EXPECT_NEAR(f[1], 0.5, 1e-12);
}

TEST(OverlapStatisticsTest, ConstructedDistribution) {
  // 100 s: 22 s silence, 51 s single, 20 s double, 5 s triple, 2 s quadruple.
  std::vector<DiarizationTrack> t(4);
  for (int k = 0; k < 4; ++k) t[k].speaker_id = "s" + std::to_string(k);
  t[0].intervals = {{22.0, 100.0}};
  t[1].intervals = {{73.0, 100.0}};
  t[2].intervals = {{93.0, 100.0}};
  t[3].intervals = {{98.0, 100.0}};
  const auto f = OverlapStatistics(t, 100.0);
  const std::vector<double> want = {0.22, 0.51, 0.20, 0.05, 0.02};
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(f[k], want[k], 1e-12) << k;
}

TEST(OverlapStatisticsTest, SumsToOneOnRandomSchedules) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto tracks = RandomSchedule(rng, 4, 30.0);
    const auto f = OverlapStatistics(tracks, 30.0);
    EXPECT_NEAR(std::accumulate(f.begin(), f.end(), 0.0), 1.0, 1e-9);
    for (double v : f) EXPECT_GE(v, 0.0);
  }
}

TEST(ValidateTrackTest, RejectsBadIntervals) {
  EXPECT_NO_THROW(ValidateTrack({"a", {{0.0, 1.0}, {1.0, 2.0}}, {}}));
  EXPECT_THROW(ValidateTrack({"a", {{1.0, 1.0}}, {}}), Error);
  EXPECT_THROW(ValidateTrack({"a", {{-1.0, 1.0}}, {}}), Error);
  EXPECT_THROW(ValidateTrack({"a", {{0.0, 2.0}, {1.0, 3.0}}, {}}), Error);
}

TEST(LtCandidatesTest, ContinuousSpeechYieldsNothing) {
  std::vector<DiarizationTrack> t = {{"a", {{0.0, 30.0}}, {}}};
  EXPECT_TRUE(ExtractLtCandidates(t, 30.0).empty());
}

TEST(LtCandidatesTest, SingleUtterance) {
  std::vector<DiarizationTrack> t = {{"a", {{0.5, 4.0}}, {}}};
  const auto c = ExtractLtCandidates(t, 4.5);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_TRUE(SatisfiesLtCriteria(t, c[0]));
  EXPECT_LE(c[0].start_s, 0.25 + 1e-9);
  EXPECT_GE(c[0].end_s, 4.25 - 1e-9);
}

TEST(LtCandidatesTest, AllCandidatesSatisfyCriteria) {
  std::mt19937_64 rng(2023);
  std::size_t total = 0;
  for (int i = 0; i < 100; ++i) {
    const auto tracks = RandomSchedule(rng, 4, 120.0);
    const auto c = ExtractLtCandidates(tracks, 120.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      const Segment& s = c[k];
      EXPECT_GE(s.duration_s(), 4.0 - 1e-9);
      EXPECT_LE(s.duration_s(), 5.0 + 1e-9);
      EXPECT_GE(BruteForceSpeech(tracks, s.start_s, s.end_s), 3.0 - 1e-9);
      EXPECT_EQ(BruteForceMaxOverlap(tracks, s.start_s, s.start_s + 0.25), 0);
      EXPECT_EQ(BruteForceMaxOverlap(tracks, s.end_s - 0.25, s.end_s), 0);
      EXPECT_EQ(s.max_simultaneous_speakers, BruteForceMaxOverlap(tracks, s.start_s, s.end_s));
      if (k > 0) {
        EXPECT_GE(s.start_s, c[k - 1].end_s - 1e-9);
      }
    }
    total += c.size();
  }
  EXPECT_GT(total, 0u);
}

TEST(DiarizationJsonTest, RoundTripAndTags) {
  const std::string text = R"({"recording_id": "S02", "duration_s": 12.5, "tracks": [
      {"speaker_id": "P05", "gender": "female", "location": "kitchen", "intervals": [[0.5, 2.0], [3.0, 4.5]]},
      {"speaker_id": "P06", "gender": "male", "intervals": [[1.0, 6.0]]}]})";
  const Recording r = ParseDiarizationJson(text);
  EXPECT_EQ(r.recording_id, "S02");
  ASSERT_EQ(r.tracks.size(), 2u);
  EXPECT_EQ(r.tracks[0].tags.at("gender"), "female");
  EXPECT_EQ(r.tracks[0].tags.at("location"), "kitchen");
  const Recording back = ParseDiarizationJson(DiarizationToJson(r));
  EXPECT_EQ(back.tracks[1].intervals.size(), 1u);
  EXPECT_DOUBLE_EQ(back.tracks[0].intervals[1].end_s, 4.5);
  EXPECT_THROW(ParseDiarizationJson(R"({"recording_id": "x", "duration_s": 5, "tracks": [{"speaker_id": "a", "intervals": [[2, 1]]}]})"),
               Error);
}

TEST(BalanceCandidatesTest, CapsEachStratum) {
  std::vector<TaggedSegment> c;
  for (int i = 0; i < 10; ++i) c.push_back({"r", {.start_s = 5.0 * i, .end_s = 5.0 * i + 4.5}, {{"gender", "male"}}});
  for (int i = 0; i < 3; ++i) c.push_back({"r", {.start_s = 100.0 + 5.0 * i, .end_s = 104.5 + 5.0 * i}, {{"gender", "female"}}});
  const std::vector<std::string> keys = {"gender"};
  const auto b = BalanceCandidates(c, keys, 4, 1);
  EXPECT_EQ(b.size(), 7u);
  EXPECT_EQ(std::count_if(b.begin(), b.end(), [](const auto& s) { return s.tags.at("gender") == "male"; }), 4);
  const auto again = BalanceCandidates(c, keys, 4, 1);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b[i].segment.start_s, again[i].segment.start_s);
}

TEST(TagCandidatesTest, DominantSpeakerTags) {
  Recording r{"S01", 10.0, {{"a", {{0.5, 4.0}}, {{"gender", "female"}}}, {"b", {{1.0, 1.5}}, {{"gender", "male"}}}}};
  const auto c = TagCandidates(r);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].recording_id, "S01");
  EXPECT_EQ(c[0].tags.at("gender"), "female");
}

}  // namespace
}  // namespace speval
