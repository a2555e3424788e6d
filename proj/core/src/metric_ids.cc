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

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "speval/error.h"
#include "speval/metrics.h"

namespace speval {

namespace {

struct MetricInfo {
  MetricId id;
  std::string_view name;
  double low;
  double high;
  bool nonintrusive;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::array<MetricInfo, 11> kMetrics = {{
    {MetricId::kSiSdr, "SI_SDR", -kInf, kInf, false},
    {MetricId::kStoi, "STOI", 0.0, 1.0, false},
    {MetricId::kPesqExt, "PESQ_EXT", 1.04, 4.64, false},
    {MetricId::kStoiExt, "STOI_EXT", 0.0, 1.0, false},
    {MetricId::kDnsmosSigExt, "DNSMOS_SIG_EXT", 1.0, 5.0, true},
    {MetricId::kDnsmosBakExt, "DNSMOS_BAK_EXT", 1.0, 5.0, true},
    {MetricId::kDnsmosOvrlExt, "DNSMOS_OVRL_EXT", 1.0, 5.0, true},
    {MetricId::kTasSiSdrExt, "TAS_SI_SDR_EXT", -kInf, kInf, true},
    {MetricId::kTasPesqExt, "TAS_PESQ_EXT", -kInf, kInf, true},
    {MetricId::kTasStoiExt, "TAS_STOI_EXT", 0.0, 1.0, true},
    {MetricId::kTasMosExt, "TAS_MOS_EXT", 1.0, 5.0, true},
}};

const MetricInfo& Info(MetricId id) {
  for (const MetricInfo& m : kMetrics) {
    if (m.id == id) return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown metric id");
}

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> SplitComma(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(Trim(std::string_view(line).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void ParseFailure(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::string_view MetricIdName(MetricId id) { return Info(id).name; }

std::optional<MetricId> ParseMetricId(std::string_view name) {
  for (const MetricInfo& m : kMetrics) {
    if (m.name == name) return m.id;
  }
  return std::nullopt;
}

std::pair<double, double> MetricRange(MetricId id) {
  const MetricInfo& m = Info(id);
  return {m.low, m.high};
}

bool IsNonintrusive(MetricId id) { return Info(id).nonintrusive; }

std::vector<MetricScore> ReadExternalScores(std::istream& in) {
  std::vector<MetricScore> scores;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (Trim(line).empty()) continue;
    const std::vector<std::string> fields = SplitComma(line);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"sample_id", "system_id", "metric_id", "value"}) {
        ParseFailure(line_no, "expected header sample_id,system_id,metric_id,value");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 4) {
      ParseFailure(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
    }
    const auto metric = ParseMetricId(fields[2]);
    if (!metric) ParseFailure(line_no, "unknown metric id '" + fields[2] + "'");
    if (fields[0].empty() || fields[1].empty()) {
      ParseFailure(line_no, "empty sample_id or system_id");
    }
    double value = 0.0;
    const char* begin = fields[3].data();
    const char* end = begin + fields[3].size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
      ParseFailure(line_no, "invalid value '" + fields[3] + "'");
    }
    const auto [low, high] = MetricRange(*metric);
    if (value < low || value > high) {
      throw Error(ErrorCode::kRangeViolation,
                  "line " + std::to_string(line_no) + ": " + fields[2] + " value " +
                      fields[3] + " outside [" + std::to_string(low) + ", " +
                      std::to_string(high) + "]");
    }
    scores.push_back({*metric, value, fields[0], fields[1]});
  }
  if (!header_seen) ParseFailure(line_no, "missing header");
  return scores;
}

std::vector<MetricScore> IngestExternalScores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileNotFound, path.string());
  return ReadExternalScores(in);
}

}  // namespace speval
