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

// speval-rt60: reverberation time of room impulse responses.
//
//   speval-rt60 rir1.wav rir2.wav ...

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "speval/audio_io.h"
#include "speval/rt60.h"
#include "tool_main.h"

int main(int argc, char** argv) {
  CLI::App app{"Schroeder-integration RT60 estimates (-5 to -25 dB fit)"};
  std::vector<std::string> files;
  app.add_option("rirs", files, "RIR WAV files")->required();
  CLI11_PARSE(app, argc, argv);

  return speval::tools::Guarded("speval-rt60", [&]() -> int {
    std::vector<speval::Rt60Estimate> estimates;
    std::printf("%-40s %8s %8s\n", "file", "rt60_s", "r2");
    for (const auto& f : files) {
      const auto e = speval::EstimateRt60(speval::LoadWav(f));
      std::printf("%-40s %8.3f %8.4f\n", f.c_str(), e.rt60_s, e.r_squared);
      estimates.push_back(e);
    }
    if (estimates.size() >= 2) {
      const auto s = speval::SummarizeRt60(estimates);
      std::printf("mean %.3f s, sd %.3f s over %zu RIRs\n", s.mean_s, s.sd_s, estimates.size());
    }
    return 0;
  });
}
