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

#ifndef SPEVAL_CAMPAIGN_H_
#define SPEVAL_CAMPAIGN_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "speval/metrics.h"

namespace speval {

struct SystemSpec {
  std::string system_id;
  std::filesystem::path output_dir;  // holds <sample_id>.wav per sample
};

struct CampaignConfig {
  std::vector<SystemSpec> systems;
  std::filesystem::path reference_manifest;
  // Subset labels to aggregate over; "all" pools every sample.
  std::vector<std::string> subsets = {"all"};
  std::vector<MetricId> metrics = {MetricId::kSiSdr, MetricId::kStoi};
  std::vector<std::filesystem::path> external_score_csvs;
  double target_lufs = -30.0;
  bool include_sanity = true;
  bool normalize_reference = true;
  // Non-intrusive metric rows are only emitted for `single_speaker_subset`.
  bool nonintrusive_single_speaker_only = false;
  std::string single_speaker_subset = "1";
  std::uint64_t seed = 0;
  unsigned workers = 0;
};

// Sanity conditions appended after the configured systems.
inline constexpr std::string_view kInputSystem = "Input";
inline constexpr std::string_view kOracleSystem = "Oracle";
inline constexpr std::string_view kRandomSystem = "Random";

bool IsSanitySystem(std::string_view system_id);

// JSON document mirroring CampaignConfig; relative paths resolve against
// `base_dir`. Throws kParseError / kValidationError.
CampaignConfig ParseCampaignConfig(const std::string& text,
                                   const std::filesystem::path& base_dir = {});
CampaignConfig LoadCampaignConfig(const std::filesystem::path& path);
void ValidateCampaignConfig(const CampaignConfig& cfg);

struct ReferenceSample {
  std::string sample_id;
  std::string subset;
  std::filesystem::path reference;
  std::optional<std::filesystem::path> mixture;
};

// JSONL, one {sample_id, subset, reference, mixture?} object per line.
std::vector<ReferenceSample> LoadReferenceManifest(const std::filesystem::path& path);

struct SampleScores {
  std::string system_id;
  std::string sample_id;
  std::string subset;
  std::map<MetricId, double> values;
};

struct ScoreRow {
  std::string system_id;
  std::string subset;
  MetricId metric = MetricId::kSiSdr;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 when n == 1
  std::size_t n = 0;
};

struct ScoreTable {
  std::vector<ScoreRow> rows;
};

struct CampaignResult {
  std::vector<SampleScores> samples;  // system-major, manifest order
  ScoreTable table;
};

// Throws kMissingOutput (listing every missing sample id) or kLengthMismatch.
CampaignResult RunCampaign(const CampaignConfig& cfg);

// Means per (system, subset, metric) in the order given by the arguments.
ScoreTable AggregateScores(std::span<const SampleScores> samples,
                           std::span<const std::string> system_order,
                           std::span<const std::string> subsets,
                           std::span<const MetricId> metrics,
                           bool nonintrusive_single_speaker_only = false,
                           const std::string& single_speaker_subset = "1");

// Unit-variance white Gaussian noise seeded by (seed, sample_id).
std::vector<double> RandomEstimate(std::size_t length, std::uint64_t seed,
                                   std::string_view sample_id);

enum class TableFormat { kCsv, kMarkdown };

// CSV is long format; markdown pivots metrics into columns per (system,
// subset) and, among non-sanity systems of each subset, bolds the best and
// underlines the second-best displayed value (ties share the mark).
// Throws kEmptyTable.
std::string EmitTable(const ScoreTable& table, TableFormat format);
ScoreTable ReadTableCsv(std::istream& in);

// Per-sample scores: system_id,sample_id,subset,<metric>...; empty = absent.
std::string ScoresToCsv(std::span<const SampleScores> samples);
std::vector<SampleScores> ReadScoresCsv(std::istream& in);

// Subjective MOS keyed by (condition_id == system_id, sample_id).
struct MosEntry {
  std::string sample_id;
  std::string condition_id;
  std::string scale;  // SIG, BAK or OVRL
  double mos = 0.0;
  std::size_t votes = 0;
};
std::vector<MosEntry> ReadMosCsv(std::istream& in);

struct CorrelationReport {
  std::vector<std::string> names;
  std::vector<std::vector<double>> matrix;
  std::size_t n = 0;  // aligned (system, sample) pairs used
};

// Column names are metric ids or MOS_SIG / MOS_BAK / MOS_OVRL. Only pairs with
// every requested column present are used. Throws kMissingMetric.
CorrelationReport CorrelationFromScores(std::span<const SampleScores> samples,
                                        std::span<const std::string> columns,
                                        std::span<const MosEntry> mos = {},
                                        bool single_speaker_only = false,
                                        const std::string& single_speaker_subset = "1");
std::string CorrelationToCsv(const CorrelationReport& report);

// scores.csv, table.md and table.csv under `out_dir`.
void WriteCampaignOutputs(const CampaignResult& result, const std::filesystem::path& out_dir);

}  // namespace speval

#endif  // SPEVAL_CAMPAIGN_H_
