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
#include <string>

#include "benchmark/benchmark.h"
#include "speval/stats.h"

namespace speval {
namespace {

VoteMatrix RandomVotes(std::size_t subjects, std::size_t conditions) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(1.0, 5.0);
  VoteMatrix m;
  for (std::size_t k = 0; k < conditions; ++k) m.condition_ids.push_back("c" + std::to_string(k));
  for (std::size_t s = 0; s < subjects; ++s) {
    m.subject_ids.push_back("s" + std::to_string(s));
    std::vector<double> row(conditions);
    for (double& v : row) v = u(rng);
    m.values.push_back(row);
  }
  return m;
}

void BM_RmAnova(benchmark::State& state) {
  const VoteMatrix m = RandomVotes(static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(RmAnova(m).p_value);
}
BENCHMARK(BM_RmAnova)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_HolmPosthoc(benchmark::State& state) {
  const VoteMatrix m = RandomVotes(8, 5);
  for (auto _ : state) benchmark::DoNotOptimize(HolmPosthoc(m).pairs.size());
}
BENCHMARK(BM_HolmPosthoc)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace speval

BENCHMARK_MAIN();
