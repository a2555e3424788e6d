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
#include "speval/audio_io.h"
#include "speval/fft.h"
#include "speval/rt60.h"
#include "speval/synthetic.h"

namespace speval {
namespace {

void BM_Resample(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const Waveform w = SyntheticSpeech(10.0, 48000, 150.0, rng);
  const int target = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Resample(w, target));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(w.size()));
}
BENCHMARK(BM_Resample)->Arg(16000)->Arg(44100)->Unit(benchmark::kMillisecond);

void BM_DecodeWav(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const auto bytes = EncodeWav(SyntheticSpeech(10.0, 16000, 150.0, rng), WavEncoding::kPcm16);
  for (auto _ : state) benchmark::DoNotOptimize(DecodeWav(bytes));
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(bytes.size()));
}
BENCHMARK(BM_DecodeWav)->Unit(benchmark::kMicrosecond);

// Reverberating 4 s of speech with a 0.6 s RIR, as mixture rendering does.
void BM_FftConvolve(benchmark::State& state) {
  std::mt19937_64 rng(6);
  const Waveform s = SyntheticSpeech(4.0, 16000, 150.0, rng);
  const Waveform h = SyntheticRir(0.6, 16000, rng);
  for (auto _ : state) benchmark::DoNotOptimize(FftConvolve(s.samples(), h.samples()));
}
BENCHMARK(BM_FftConvolve)->Unit(benchmark::kMillisecond);

void BM_EstimateRt60(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const Waveform h = SyntheticRir(0.58, 16000, rng);
  for (auto _ : state) benchmark::DoNotOptimize(EstimateRt60(h).rt60_s);
}
BENCHMARK(BM_EstimateRt60)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace speval

BENCHMARK_MAIN();
