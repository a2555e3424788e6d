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

#ifndef SPEVAL_METRICS_H_
#define SPEVAL_METRICS_H_

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "speval/audio_io.h"

namespace speval {

// Intrusive metrics are computed here; the *_EXT ids are produced by external
// tools (PESQ, DNSMOS, TorchAudio-Squim, ...) and ingested from CSV.
enum class MetricId {
  kSiSdr,
  kStoi,
  kPesqExt,
  kStoiExt,
  kDnsmosSigExt,
  kDnsmosBakExt,
  kDnsmosOvrlExt,
  kTasSiSdrExt,
  kTasPesqExt,
  kTasStoiExt,
  kTasMosExt,
};

std::string_view MetricIdName(MetricId id);
std::optional<MetricId> ParseMetricId(std::string_view name);

// Closed validity interval for a metric's values; unbounded metrics return
// (-inf, +inf).
std::pair<double, double> MetricRange(MetricId id);

// True for the nonintrusive learning-based metrics (DNSMOS, TorchAudio-Squim).
bool IsNonintrusive(MetricId id);

struct MetricScore {
  MetricId metric_id = MetricId::kSiSdr;
  double value = 0.0;
  std::string sample_id;
  std::string system_id;

  friend bool operator==(const MetricScore&, const MetricScore&) = default;
};

// Scale-invariant SDR in dB. A machine-epsilon guard in the denominator keeps
// a perfect estimate finite.
double SiSdr(const Waveform& reference, const Waveform& estimate);

// Short-time objective intelligibility in [0, 1]. Both signals are resampled
// to 10 kHz; frames more than 40 dB below the loudest reference frame are
// dropped. Throws kTooShort when fewer than 30 frames remain.
double Stoi(const Waveform& reference, const Waveform& estimate);

// Parses `sample_id,system_id,metric_id,value` rows (header required).
// Throws kParseError (message carries the line number) or kRangeViolation.
std::vector<MetricScore> ReadExternalScores(std::istream& in);
std::vector<MetricScore> IngestExternalScores(const std::filesystem::path& path);

}  // namespace speval

#endif  // SPEVAL_METRICS_H_
