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
#include <vector>

#include "benchmark/benchmark.h"
#include "speval/audio_io.h"
#include "speval/metrics.h"
#include "speval/synthetic.h"

namespace speval {
namespace {

std::pair<Waveform, Waveform> Pair(double seconds, int rate) {
  std::mt19937_64 rng(3);
  const Waveform s = SyntheticSpeech(seconds, rate, 140.0, rng);
  const Waveform n = SyntheticNoise(seconds, rate, rng);
  std::vector<double> y(s.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = s[i] + n[i];
  return {s, Waveform(std::move(y), rate)};
}

void BM_Stoi(benchmark::State& state) {
  const auto [s, y] = Pair(static_cast<double>(state.range(0)), 16000);
  for (auto _ : state) benchmark::DoNotOptimize(Stoi(s, y));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s.size()));
}
BENCHMARK(BM_Stoi)->Arg(3)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_SiSdr(benchmark::State& state) {
  const auto [s, y] = Pair(static_cast<double>(state.range(0)), 16000);
  for (auto _ : state) benchmark::DoNotOptimize(SiSdr(s, y));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s.size()));
}
BENCHMARK(BM_SiSdr)->Arg(3)->Arg(10)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace speval

BENCHMARK_MAIN();
