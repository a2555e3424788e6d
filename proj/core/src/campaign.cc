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

#include "speval/campaign.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "parallel.h"
#include "speval/error.h"
#include "speval/loudness.h"
#include "speval/stats.h"

namespace speval {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string Exact(double v) { return Format("%.17g", v); }

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool ReadLine(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

void StripBom(std::string& s) {
  if (s.rfind("\xEF\xBB\xBF", 0) == 0) s.erase(0, 3);
}

double ParseNumber(const std::string& cell, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used == cell.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kParseError,
              "line " + std::to_string(line_no) + ": bad number '" + cell + "'");
}

MetricId MetricFromName(const std::string& name) {
  auto id = ParseMetricId(name);
  if (!id) throw Error(ErrorCode::kParseError, "unknown metric '" + name + "'");
  return *id;
}

// SI-SDR style dB columns get one decimal, bounded scores two.
std::string Display(MetricId m, double v) {
  const bool db = m == MetricId::kSiSdr || m == MetricId::kTasSiSdrExt;
  return Format(db ? "%.1f" : "%.2f", v);
}

bool InSubset(const std::string& sample_subset, const std::string& subset) {
  return subset == "all" || sample_subset == subset;
}

Waveform Prepare(const Waveform& w, double target_lufs, bool normalize,
                 const std::string& what) {
  if (!normalize) return w;
  try {
    return NormalizeLoudness(w, target_lufs);
  } catch (const Error& e) {
    throw Error(e.code(), what + ": " + e.what());
  }
}

}  // namespace

bool IsSanitySystem(std::string_view id) {
  return id == kInputSystem || id == kOracleSystem || id == kRandomSystem;
}

void ValidateCampaignConfig(const CampaignConfig& cfg) {
  std::set<std::string> ids;
  for (const auto& s : cfg.systems) {
    if (s.system_id.empty()) throw Error(ErrorCode::kValidationError, "empty system_id");
    if (IsSanitySystem(s.system_id)) {
      throw Error(ErrorCode::kValidationError,
                  "system_id '" + s.system_id + "' is reserved for a sanity condition");
    }
    if (!ids.insert(s.system_id).second) {
      throw Error(ErrorCode::kValidationError, "duplicate system_id '" + s.system_id + "'");
    }
  }
  if (cfg.subsets.empty()) throw Error(ErrorCode::kValidationError, "subsets must be non-empty");
  if (cfg.metrics.empty()) throw Error(ErrorCode::kValidationError, "metrics must be non-empty");
  if (cfg.reference_manifest.empty()) {
    throw Error(ErrorCode::kValidationError, "reference_manifest is required");
  }
}

CampaignConfig ParseCampaignConfig(const std::string& text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("campaign config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "campaign config must be an object");
  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };
  CampaignConfig cfg;
  try {
    for (const auto& s : j.value("systems", json::array())) {
      cfg.systems.push_back(
          {s.at("system_id").get<std::string>(), resolve(s.at("output_dir").get<std::string>())});
    }
    cfg.reference_manifest = resolve(j.at("reference_manifest").get<std::string>());
    if (j.contains("subsets")) {
      cfg.subsets.clear();
      for (const auto& s : j["subsets"]) {
        cfg.subsets.push_back(s.is_string() ? s.get<std::string>() : s.dump());
      }
    }
    if (j.contains("metrics")) {
      cfg.metrics.clear();
      for (const auto& m : j["metrics"]) cfg.metrics.push_back(MetricFromName(m.get<std::string>()));
    }
    for (const auto& p : j.value("external_score_csvs", json::array())) {
      cfg.external_score_csvs.push_back(resolve(p.get<std::string>()));
    }
    cfg.target_lufs = j.value("target_lufs", cfg.target_lufs);
    cfg.include_sanity = j.value("include_sanity", cfg.include_sanity);
    cfg.normalize_reference = j.value("normalize_reference", cfg.normalize_reference);
    cfg.nonintrusive_single_speaker_only =
        j.value("nonintrusive_single_speaker_only", cfg.nonintrusive_single_speaker_only);
    cfg.single_speaker_subset = j.value("single_speaker_subset", cfg.single_speaker_subset);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.workers = j.value("workers", cfg.workers);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("campaign config: ") + e.what());
  }
  ValidateCampaignConfig(cfg);
  return cfg;
}

CampaignConfig LoadCampaignConfig(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileNotFound, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseCampaignConfig(ss.str(), path.parent_path());
}

std::vector<ReferenceSample> LoadReferenceManifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileNotFound, "cannot open " + path.string());
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    fs::path q(p);
    return q.is_absolute() ? q : base / q;
  };
  std::vector<ReferenceSample> out;
  std::string line;
  std::size_t line_no = 0;
  std::set<std::string> seen;
  while (ReadLine(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      ReferenceSample s;
      s.sample_id = j.at("sample_id").get<std::string>();
      const json& subset = j.at("subset");
      s.subset = subset.is_string() ? subset.get<std::string>() : subset.dump();
      s.reference = resolve(j.at("reference").get<std::string>());
      if (j.contains("mixture")) s.mixture = resolve(j["mixture"].get<std::string>());
      if (!seen.insert(s.sample_id).second) {
        throw Error(ErrorCode::kParseError, "duplicate sample_id " + s.sample_id);
      }
      out.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParseError, path.string() + " line " + std::to_string(line_no) +
                                              ": " + e.what());
    }
  }
  return out;
}

std::vector<double> RandomEstimate(std::size_t length, std::uint64_t seed,
                                   std::string_view sample_id) {
  std::mt19937_64 rng(seed ^ Fnv1a(sample_id));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> out(length);
  for (double& v : out) v = gauss(rng);
  return out;
}

CampaignResult RunCampaign(const CampaignConfig& cfg) {
  ValidateCampaignConfig(cfg);
  const auto refs = LoadReferenceManifest(cfg.reference_manifest);

  std::vector<std::string> system_order;
  for (const auto& s : cfg.systems) system_order.push_back(s.system_id);
  bool has_mixtures = !refs.empty();
  for (const auto& r : refs) has_mixtures = has_mixtures && r.mixture.has_value();
  if (cfg.include_sanity) {
    if (has_mixtures) system_order.emplace_back(kInputSystem);
    system_order.emplace_back(kOracleSystem);
    system_order.emplace_back(kRandomSystem);
  }

  for (const auto& sys : cfg.systems) {
    std::vector<std::string> missing;
    for (const auto& r : refs) {
      if (!fs::exists(sys.output_dir / (r.sample_id + ".wav"))) missing.push_back(r.sample_id);
    }
    if (!missing.empty()) {
      std::string list;
      for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
      throw Error(ErrorCode::kMissingOutput,
                  "system " + sys.system_id + " lacks outputs for: " + list);
    }
  }

  std::vector<MetricId> intrusive;
  for (MetricId m : cfg.metrics) {
    if (m == MetricId::kSiSdr || m == MetricId::kStoi) intrusive.push_back(m);
  }

  std::vector<Waveform> references(refs.size());
  internal::ParallelFor(refs.size(), cfg.workers, [&](std::size_t i) {
    references[i] = Prepare(LoadWav(refs[i].reference), cfg.target_lufs,
                            cfg.normalize_reference, "reference " + refs[i].sample_id);
  });

  const std::size_t n_jobs = system_order.size() * refs.size();
  std::vector<SampleScores> samples(n_jobs);
  internal::ParallelFor(n_jobs, cfg.workers, [&](std::size_t job) {
    const std::size_t s = job / refs.size();
    const std::size_t i = job % refs.size();
    const std::string& system = system_order[s];
    const ReferenceSample& ref = refs[i];
    const Waveform& reference = references[i];
    Waveform estimate;
    if (system == kOracleSystem) {
      estimate = reference;
    } else if (system == kRandomSystem) {
      estimate = Prepare(Waveform(RandomEstimate(reference.size(), cfg.seed, ref.sample_id),
                                  reference.sample_rate()),
                         cfg.target_lufs, true, "random " + ref.sample_id);
    } else {
      const fs::path path = system == kInputSystem
                                ? *ref.mixture
                                : cfg.systems[s].output_dir / (ref.sample_id + ".wav");
      estimate = Prepare(LoadWav(path), cfg.target_lufs, true, system + "/" + ref.sample_id);
    }
    if (estimate.size() != reference.size() ||
        estimate.sample_rate() != reference.sample_rate()) {
      throw Error(ErrorCode::kLengthMismatch,
                  system + "/" + ref.sample_id + ": estimate has " +
                      std::to_string(estimate.size()) + " samples, reference " +
                      std::to_string(reference.size()));
    }
    SampleScores& out = samples[job];
    out.system_id = system;
    out.sample_id = ref.sample_id;
    out.subset = ref.subset;
    for (MetricId m : intrusive) {
      out.values[m] = m == MetricId::kSiSdr ? SiSdr(reference, estimate) : Stoi(reference, estimate);
    }
  });

  // External scores, keyed by (system, sample).
  std::set<MetricId> wanted(cfg.metrics.begin(), cfg.metrics.end());
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    index[{samples[k].system_id, samples[k].sample_id}] = k;
  }
  for (const auto& csv : cfg.external_score_csvs) {
    if (!fs::exists(csv)) {
      std::cerr << "campaign: external score file " << csv.string()
                << " not found; its columns are left empty\n";
      continue;
    }
    for (const MetricScore& score : IngestExternalScores(csv)) {
      if (!wanted.contains(score.metric_id)) continue;
      auto it = index.find({score.system_id, score.sample_id});
      if (it != index.end()) samples[it->second].values[score.metric_id] = score.value;
    }
  }

  CampaignResult result;
  result.table = AggregateScores(samples, system_order, cfg.subsets, cfg.metrics,
                                 cfg.nonintrusive_single_speaker_only, cfg.single_speaker_subset);
  result.samples = std::move(samples);
  return result;
}

ScoreTable AggregateScores(std::span<const SampleScores> samples,
                           std::span<const std::string> system_order,
                           std::span<const std::string> subsets,
                           std::span<const MetricId> metrics,
                           bool nonintrusive_single_speaker_only,
                           const std::string& single_speaker_subset) {
  ScoreTable table;
  for (const auto& system : system_order) {
    for (const auto& subset : subsets) {
      for (MetricId m : metrics) {
        if (nonintrusive_single_speaker_only && IsNonintrusive(m) &&
            subset != single_speaker_subset) {
          continue;
        }
        std::vector<double> values;
        for (const auto& s : samples) {
          if (s.system_id != system || !InSubset(s.subset, subset)) continue;
          if (auto it = s.values.find(m); it != s.values.end()) values.push_back(it->second);
        }
        if (values.empty()) continue;
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        const double sd =
            values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
        table.rows.push_back({system, subset, m, mean, sd, values.size()});
      }
    }
  }
  return table;
}

std::string EmitTable(const ScoreTable& table, TableFormat format) {
  if (table.rows.empty()) throw Error(ErrorCode::kEmptyTable, "score table is empty");
  std::ostringstream out;
  if (format == TableFormat::kCsv) {
    out << "system_id,subset,metric_id,mean,sd,n\n";
    for (const auto& r : table.rows) {
      out << r.system_id << ',' << r.subset << ',' << MetricIdName(r.metric) << ','
          << Exact(r.mean) << ',' << Exact(r.sd) << ',' << r.n << '\n';
    }
    return out.str();
  }

  std::vector<MetricId> metrics;
  std::vector<std::pair<std::string, std::string>> keys;  // (system, subset)
  std::map<std::pair<std::string, std::string>, std::map<MetricId, std::string>> cells;
  for (const auto& r : table.rows) {
    if (std::find(metrics.begin(), metrics.end(), r.metric) == metrics.end()) {
      metrics.push_back(r.metric);
    }
    const std::pair<std::string, std::string> key{r.system_id, r.subset};
    if (!cells.contains(key)) keys.push_back(key);
    cells[key][r.metric] = Display(r.metric, r.mean);
  }

  // Mark per (subset, metric) among non-sanity rows, on displayed values.
  std::map<std::pair<std::string, std::string>, std::map<MetricId, std::string>> marked = cells;
  std::set<std::string> subsets;
  for (const auto& k : keys) subsets.insert(k.second);
  for (const auto& subset : subsets) {
    for (MetricId m : metrics) {
      std::vector<double> distinct;
      for (const auto& k : keys) {
        if (k.second != subset || IsSanitySystem(k.first)) continue;
        auto it = cells[k].find(m);
        if (it != cells[k].end()) distinct.push_back(std::stod(it->second));
      }
      std::sort(distinct.begin(), distinct.end(), std::greater<>());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      if (distinct.empty()) continue;
      for (const auto& k : keys) {
        if (k.second != subset || IsSanitySystem(k.first)) continue;
        auto it = cells[k].find(m);
        if (it == cells[k].end()) continue;
        const double v = std::stod(it->second);
        if (v == distinct[0]) {
          marked[k][m] = "**" + it->second + "**";
        } else if (distinct.size() > 1 && v == distinct[1]) {
          marked[k][m] = "<u>" + it->second + "</u>";
        }
      }
    }
  }

  out << "| System | Subset |";
  for (MetricId m : metrics) out << ' ' << MetricIdName(m) << " |";
  out << "\n|---|---|";
  for (std::size_t i = 0; i < metrics.size(); ++i) out << "---:|";
  out << '\n';
  for (const auto& k : keys) {
    out << "| " << k.first << " | " << k.second << " |";
    for (MetricId m : metrics) {
      auto it = marked[k].find(m);
      out << ' ' << (it == marked[k].end() ? "-" : it->second) << " |";
    }
    out << '\n';
  }
  return out.str();
}

ScoreTable ReadTableCsv(std::istream& in) {
  std::string line;
  if (!ReadLine(in, line)) throw Error(ErrorCode::kParseError, "empty table CSV");
  StripBom(line);
  if (line != "system_id,subset,metric_id,mean,sd,n") {
    throw Error(ErrorCode::kParseError, "unexpected table CSV header '" + line + "'");
  }
  ScoreTable t;
  std::size_t line_no = 1;
  while (ReadLine(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = SplitCsvLine(line);
    if (cells.size() != 6) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected 6 fields");
    }
    t.rows.push_back({cells[0], cells[1], MetricFromName(cells[2]), ParseNumber(cells[3], line_no),
                      ParseNumber(cells[4], line_no),
                      static_cast<std::size_t>(ParseNumber(cells[5], line_no))});
  }
  return t;
}

std::string ScoresToCsv(std::span<const SampleScores> samples) {
  std::vector<MetricId> metrics;
  for (const auto& s : samples) {
    for (const auto& [m, v] : s.values) {
      if (std::find(metrics.begin(), metrics.end(), m) == metrics.end()) metrics.push_back(m);
    }
  }
  std::sort(metrics.begin(), metrics.end());
  std::ostringstream out;
  out << "system_id,sample_id,subset";
  for (MetricId m : metrics) out << ',' << MetricIdName(m);
  out << '\n';
  for (const auto& s : samples) {
    out << s.system_id << ',' << s.sample_id << ',' << s.subset;
    for (MetricId m : metrics) {
      out << ',';
      if (auto it = s.values.find(m); it != s.values.end()) out << Exact(it->second);
    }
    out << '\n';
  }
  return out.str();
}

std::vector<SampleScores> ReadScoresCsv(std::istream& in) {
  std::string line;
  if (!ReadLine(in, line)) throw Error(ErrorCode::kParseError, "empty scores CSV");
  StripBom(line);
  const auto header = SplitCsvLine(line);
  if (header.size() < 3 || header[0] != "system_id" || header[1] != "sample_id" ||
      header[2] != "subset") {
    throw Error(ErrorCode::kParseError, "scores CSV must start with system_id,sample_id,subset");
  }
  std::vector<MetricId> metrics;
  for (std::size_t c = 3; c < header.size(); ++c) metrics.push_back(MetricFromName(header[c]));
  std::vector<SampleScores> out;
  std::size_t line_no = 1;
  while (ReadLine(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = SplitCsvLine(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": field count");
    }
    SampleScores s{cells[0], cells[1], cells[2], {}};
    for (std::size_t c = 3; c < cells.size(); ++c) {
      if (!cells[c].empty()) s.values[metrics[c - 3]] = ParseNumber(cells[c], line_no);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<MosEntry> ReadMosCsv(std::istream& in) {
  std::string line;
  if (!ReadLine(in, line)) throw Error(ErrorCode::kParseError, "empty MOS CSV");
  StripBom(line);
  if (line != "sample_id,condition_id,scale,mos,n_votes") {
    throw Error(ErrorCode::kParseError, "unexpected MOS CSV header '" + line + "'");
  }
  std::vector<MosEntry> out;
  std::size_t line_no = 1;
  while (ReadLine(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = SplitCsvLine(line);
    if (cells.size() != 5) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected 5 fields");
    }
    out.push_back({cells[0], cells[1], cells[2], ParseNumber(cells[3], line_no),
                   static_cast<std::size_t>(ParseNumber(cells[4], line_no))});
  }
  return out;
}

CorrelationReport CorrelationFromScores(std::span<const SampleScores> samples,
                                        std::span<const std::string> columns,
                                        std::span<const MosEntry> mos, bool single_speaker_only,
                                        const std::string& single_speaker_subset) {
  std::map<std::tuple<std::string, std::string, std::string>, double> mos_index;
  std::set<std::string> mos_columns;
  for (const auto& e : mos) {
    mos_index[{e.condition_id, e.sample_id, "MOS_" + e.scale}] = e.mos;
    mos_columns.insert("MOS_" + e.scale);
  }
  std::set<MetricId> present;
  for (const auto& s : samples) {
    for (const auto& [m, v] : s.values) present.insert(m);
  }
  std::vector<std::optional<MetricId>> ids;
  for (const auto& c : columns) {
    if (auto id = ParseMetricId(c)) {
      if (!present.contains(*id)) throw Error(ErrorCode::kMissingMetric, "no scores for " + c);
      ids.push_back(*id);
    } else if (mos_columns.contains(c)) {
      ids.push_back(std::nullopt);
    } else {
      throw Error(ErrorCode::kMissingMetric, "unknown or absent column " + c);
    }
  }

  std::map<std::string, std::vector<double>> data;
  std::size_t n = 0;
  for (const auto& s : samples) {
    if (single_speaker_only && s.subset != single_speaker_subset) continue;
    std::vector<double> row;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (ids[c]) {
        auto it = s.values.find(*ids[c]);
        if (it == s.values.end()) break;
        row.push_back(it->second);
      } else {
        auto it = mos_index.find({s.system_id, s.sample_id, columns[c]});
        if (it == mos_index.end()) break;
        row.push_back(it->second);
      }
    }
    if (row.size() != columns.size()) continue;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      // A column requested twice is stored once.
      if (std::find(columns.begin(), columns.begin() + c, columns[c]) != columns.begin() + c) continue;
      data[columns[c]].push_back(row[c]);
    }
    ++n;
  }
  for (const auto& c : columns) data.try_emplace(c);
  CorrelationReport report;
  report.names.assign(columns.begin(), columns.end());
  report.matrix = CorrelationMatrix(data, columns);
  report.n = n;
  return report;
}

std::string CorrelationToCsv(const CorrelationReport& report) {
  std::ostringstream out;
  out << "metric";
  for (const auto& name : report.names) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < report.names.size(); ++i) {
    out << report.names[i];
    for (double v : report.matrix[i]) out << ',' << Format("%.6f", v);
    out << '\n';
  }
  return out.str();
}

void WriteCampaignOutputs(const CampaignResult& result, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream f(out_dir / name, std::ios::binary);
    if (!f) throw Error(ErrorCode::kIoError, "cannot write " + (out_dir / name).string());
    f << text;
  };
  write("scores.csv", ScoresToCsv(result.samples));
  write("table.csv", EmitTable(result.table, TableFormat::kCsv));
  write("table.md", EmitTable(result.table, TableFormat::kMarkdown));
}

}  // namespace speval
