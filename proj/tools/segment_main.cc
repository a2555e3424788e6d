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

// speval-segment: listening-test candidate extraction from diarization labels.
//
//   speval-segment candidates --diarization s01.json s02.json
//                             [--balance gender,location --per-stratum 4]
//   speval-segment overlap --diarization s01.json

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "speval/segmenter.h"
#include "tool_main.h"

int main(int argc, char** argv) {
  CLI::App app{"Diarization-driven segmentation"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  auto* cands = app.add_subcommand("candidates", "Emit 4-5 s candidate segments as JSON lines");
  cands->add_option("--diarization", files, "Diarization JSON files")->required();
  speval::LtCriteria criteria;
  cands->add_option("--min-duration", criteria.min_duration_s, "Minimum segment length (s)");
  cands->add_option("--max-duration", criteria.max_duration_s, "Maximum segment length (s)");
  cands->add_option("--min-speech", criteria.min_speech_s, "Minimum speech inside (s)");
  cands->add_option("--margin", criteria.silent_margin_s, "Silent margin at both ends (s)");
  std::vector<std::string> keys;
  std::size_t per_stratum = 0;
  std::uint64_t seed = 0;
  cands->add_option("--balance", keys, "Tag keys to stratify on")->delimiter(',');
  cands->add_option("--per-stratum", per_stratum, "Candidates kept per stratum");
  cands->add_option("--seed", seed, "Shuffle seed for balancing");

  auto* overlap = app.add_subcommand("overlap", "Time fraction per number of active speakers");
  overlap->add_option("--diarization", files, "Diarization JSON files")->required();

  CLI11_PARSE(app, argc, argv);

  return speval::tools::Guarded("speval-segment", [&]() -> int {
    std::vector<speval::Recording> recordings;
    for (const auto& f : files) recordings.push_back(speval::LoadDiarization(f));
    if (*overlap) {
      for (const auto& r : recordings) {
        const auto frac = speval::OverlapStatistics(r.tracks, r.duration_s);
        std::cout << r.recording_id;
        for (std::size_t k = 0; k < frac.size(); ++k) {
          std::printf(" %zu:%.4f", k, frac[k]);
          std::fflush(stdout);
        }
        std::cout << '\n';
      }
      return 0;
    }
    std::vector<speval::TaggedSegment> all;
    for (const auto& r : recordings) {
      for (auto& s : speval::TagCandidates(r, criteria)) all.push_back(std::move(s));
    }
    if (!keys.empty() && per_stratum > 0) all = speval::BalanceCandidates(all, keys, per_stratum, seed);
    for (const auto& c : all) {
      std::cout << nlohmann::json{{"recording_id", c.recording_id},
                                  {"start_s", c.segment.start_s},
                                  {"end_s", c.segment.end_s},
                                  {"max_simultaneous_speakers", c.segment.max_simultaneous_speakers},
                                  {"speech_s", c.segment.speech_seconds},
                                  {"tags", c.tags}}
                       .dump()
                << '\n';
    }
    return 0;
  });
}
