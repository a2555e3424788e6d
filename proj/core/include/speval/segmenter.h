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

#ifndef SPEVAL_SEGMENTER_H_
#define SPEVAL_SEGMENTER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace speval {

// Diarization labels have a 0.01 s resolution; all activity computations run
// on that tick grid with half-open intervals: [a, b) is active at tick t iff
// a <= t < b.
inline constexpr double kTickSeconds = 0.01;

std::int64_t SecondsToTicks(double seconds);
double TicksToSeconds(std::int64_t ticks);

struct Interval {
  double start_s = 0.0;
  double end_s = 0.0;
};

struct DiarizationTrack {
  std::string speaker_id;
  std::vector<Interval> intervals;
  // Optional metadata (gender, location, session) used for stratification.
  std::map<std::string, std::string> tags;
};

struct Recording {
  std::string recording_id;
  double duration_s = 0.0;
  std::vector<DiarizationTrack> tracks;
};

struct Segment {
  double start_s = 0.0;
  double end_s = 0.0;
  int max_simultaneous_speakers = 0;
  double speech_seconds = 0.0;

  double duration_s() const { return end_s - start_s; }
};

// Checks start < end, non-negative times, and no overlap within one speaker.
// Throws kParseError describing the first violation.
void ValidateTrack(const DiarizationTrack& track);

// Maximum number of simultaneously active speakers inside [start_s, end_s).
int MaxOverlap(std::span<const DiarizationTrack> tracks, double start_s,
               double end_s);

// Fraction of [0, total_duration_s) spent at each simultaneous-speaker count.
// The result has max(5, tracks.size() + 1) entries and sums to 1.
std::vector<double> OverlapStatistics(std::span<const DiarizationTrack> tracks,
                                      double total_duration_s);

// Describes [start_s, end_s): max overlap and union speech time.
Segment DescribeSegment(std::span<const DiarizationTrack> tracks, double start_s,
                        double end_s);

struct LtCriteria {
  double min_duration_s = 4.0;
  double max_duration_s = 5.0;
  double min_speech_s = 3.0;
  double silent_margin_s = 0.25;
  double scan_step_s = 0.25;
};

// Greedy left-to-right search for listening-test candidates: at each scan
// position the longest window satisfying all criteria is taken and the scan
// resumes at its end.
std::vector<Segment> ExtractLtCandidates(std::span<const DiarizationTrack> tracks,
                                         double audio_duration_s,
                                         const LtCriteria& criteria = {});

bool SatisfiesLtCriteria(std::span<const DiarizationTrack> tracks,
                         const Segment& segment, const LtCriteria& criteria = {});

struct TaggedSegment {
  std::string recording_id;
  Segment segment;
  // Tags of the speaker with the most speech in the segment.
  std::map<std::string, std::string> tags;
};

// Candidates of one recording with the dominant speaker's tags attached.
std::vector<TaggedSegment> TagCandidates(const Recording& recording,
                                         const LtCriteria& criteria = {});

// Stratified post-filter: groups candidates by the values of `keys` and draws
// up to `per_stratum` from each group with a seeded shuffle. Output is ordered
// by stratum, then draw order.
std::vector<TaggedSegment> BalanceCandidates(std::span<const TaggedSegment> candidates,
                                             std::span<const std::string> keys,
                                             std::size_t per_stratum,
                                             std::uint64_t seed);

// Diarization JSON: {recording_id, duration_s, tracks: [{speaker_id, gender?,
// location?, session?, intervals: [[s, e], ...]}]}.
Recording ParseDiarizationJson(const std::string& text);
Recording LoadDiarization(const std::filesystem::path& path);
std::string DiarizationToJson(const Recording& recording);

}  // namespace speval

#endif  // SPEVAL_SEGMENTER_H_
