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

#include <random>

#include "benchmark/benchmark.h"
#include "speval/loudness.h"
#include "speval/synthetic.h"

namespace speval {
namespace {

void BM_MeasureLoudness(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int rate = static_cast<int>(state.range(0));
  const Waveform w = SyntheticSpeech(10.0, rate, 120.0, rng);
  for (auto _ : state) benchmark::DoNotOptimize(MeasureLoudness(w).integrated_lufs);
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(w.size()));
}
BENCHMARK(BM_MeasureLoudness)->Arg(16000)->Arg(48000)->Unit(benchmark::kMillisecond);

void BM_NormalizeLoudness(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const Waveform w = SyntheticSpeech(10.0, 16000, 180.0, rng);
  for (auto _ : state) benchmark::DoNotOptimize(NormalizeLoudness(w, -30.0));
}
BENCHMARK(BM_NormalizeLoudness)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace speval

BENCHMARK_MAIN();
