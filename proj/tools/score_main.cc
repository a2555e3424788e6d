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

// speval-score: intrusive metrics for one reference/estimate pair.
//
//   speval-score --reference clean.wav --estimate enhanced.wav [--no-normalize]

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "speval/audio_io.h"
#include "speval/loudness.h"
#include "speval/metrics.h"
#include "tool_main.h"

int main(int argc, char** argv) {
  CLI::App app{"SI-SDR, STOI and loudness of an estimate against a reference"};
  std::string ref_path;
  std::string est_path;
  double target = speval::kDefaultTargetLufs;
  bool no_normalize = false;
  app.add_option("--reference", ref_path, "Reference WAV")->required();
  app.add_option("--estimate", est_path, "Estimate WAV")->required();
  app.add_option("--target-lufs", target, "Loudness both sides are normalized to");
  app.add_flag("--no-normalize", no_normalize, "Score the signals as loaded");
  CLI11_PARSE(app, argc, argv);

  return speval::tools::Guarded("speval-score", [&]() -> int {
    speval::Waveform ref = speval::LoadWav(ref_path);
    speval::Waveform est = speval::LoadWav(est_path);
    std::printf("reference loudness %.2f LUFS\n", speval::MeasureLoudness(ref).integrated_lufs);
    std::printf("estimate  loudness %.2f LUFS\n", speval::MeasureLoudness(est).integrated_lufs);
    if (!no_normalize) {
      ref = speval::NormalizeLoudness(ref, target);
      est = speval::NormalizeLoudness(est, target);
    }
    std::printf("SI_SDR %.3f dB\n", speval::SiSdr(ref, est));
    std::printf("STOI   %.4f\n", speval::Stoi(ref, est));
    return 0;
  });
}
