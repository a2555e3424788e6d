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

// speval-campaign: objective evaluation campaigns.
//
//   speval-campaign run   --config campaign.json --out results/
//   speval-campaign table --in results/ --format md
//   speval-campaign corr  --scores results/scores.csv --metrics SI_SDR,STOI
//                         [--mos mos.csv] [--single-speaker-only] [--out corr.csv]

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "speval/campaign.h"
#include "speval/error.h"
#include "tool_main.h"

namespace {

std::ifstream OpenOrThrow(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw speval::Error(speval::ErrorCode::kFileNotFound, "cannot open " + path);
  return in;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Objective speech-enhancement evaluation campaigns"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Score every system against the reference manifest");
  std::string config_path;
  std::string out_dir = "campaign_out";
  int workers = -1;
  run->add_option("--config", config_path, "Campaign config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--workers", workers, "Worker threads (default: config value)");

  auto* table = app.add_subcommand("table", "Print the aggregated result table");
  std::string in_dir = "campaign_out";
  std::string format = "md";
  table->add_option("--in", in_dir, "Directory written by `run`");
  table->add_option("--format", format, "md or csv")->check(CLI::IsMember({"md", "csv"}));

  auto* corr = app.add_subcommand("corr", "Pearson correlation between score columns");
  std::string scores_path;
  std::vector<std::string> metrics;
  std::string mos_path;
  std::string corr_out;
  bool single_speaker = false;
  std::string single_subset = "1";
  corr->add_option("--scores", scores_path, "Per-sample scores.csv")->required();
  corr->add_option("--metrics", metrics, "Columns, e.g. SI_SDR,STOI,MOS_OVRL")
      ->required()
      ->delimiter(',');
  corr->add_option("--mos", mos_path, "MOS CSV exported by the listening-test service");
  corr->add_flag("--single-speaker-only", single_speaker, "Use single-speaker samples only");
  corr->add_option("--single-speaker-subset", single_subset, "Subset label of single-speaker samples");
  corr->add_option("--out", corr_out, "Write the matrix CSV here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  return speval::tools::Guarded("speval-campaign", [&]() -> int {
    if (*run) {
      speval::CampaignConfig cfg = speval::LoadCampaignConfig(config_path);
      if (workers >= 0) cfg.workers = static_cast<unsigned>(workers);
      const speval::CampaignResult result = speval::RunCampaign(cfg);
      speval::WriteCampaignOutputs(result, out_dir);
      std::cout << speval::EmitTable(result.table, speval::TableFormat::kMarkdown);
      return 0;
    }
    if (*table) {
      auto in = OpenOrThrow(in_dir + "/table.csv");
      const speval::ScoreTable t = speval::ReadTableCsv(in);
      std::cout << speval::EmitTable(
          t, format == "md" ? speval::TableFormat::kMarkdown : speval::TableFormat::kCsv);
      return 0;
    }
    auto in = OpenOrThrow(scores_path);
    const auto samples = speval::ReadScoresCsv(in);
    std::vector<speval::MosEntry> mos;
    if (!mos_path.empty()) {
      auto mos_in = OpenOrThrow(mos_path);
      mos = speval::ReadMosCsv(mos_in);
    }
    const auto report =
        speval::CorrelationFromScores(samples, metrics, mos, single_speaker, single_subset);
    const std::string csv = speval::CorrelationToCsv(report);
    if (corr_out.empty()) {
      std::cout << csv;
    } else {
      std::ofstream(corr_out) << csv;
    }
    std::cerr << "pairs used: " << report.n << '\n';
    return 0;
  });
}
