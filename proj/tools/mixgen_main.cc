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

// speval-mixgen: synthetic reverberant noisy-speech datasets.
//
//   speval-mixgen generate --rir-catalog rirs.json --speech-corpus speech.json
//                          --noise-manifest noise.json --patterns patterns/
//                          --count 2000 --seed 7 --out dataset/
//   speval-mixgen plan     (same inputs) --count 10   # print plans only
//   speval-mixgen demo-assets --out assets/           # synthetic inputs

#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "speval/mixgen.h"
#include "speval/synthetic.h"
#include "tool_main.h"

namespace {

struct Inputs {
  std::string rir_catalog;
  std::string speech_corpus;
  std::string noise_manifest;
  std::string patterns;
};

void AddInputOptions(CLI::App* cmd, Inputs& in) {
  cmd->add_option("--rir-catalog", in.rir_catalog, "RIR catalog JSON")->required();
  cmd->add_option("--speech-corpus", in.speech_corpus, "Speech corpus JSON")->required();
  cmd->add_option("--noise-manifest", in.noise_manifest, "Noise segment JSON")->required();
  cmd->add_option("--patterns", in.patterns, "Diarization JSON file or directory")->required();
}

void AddConfigOptions(CLI::App* cmd, speval::MixConfig& cfg, std::vector<double>& probs) {
  cmd->add_option("--seed", cfg.seed, "RNG seed");
  cmd->add_option("--probs", probs, "Speaker-count probabilities for n=1,2,3")
      ->delimiter(',')
      ->expected(3);
  cmd->add_option("--snr-mean", cfg.snr_mean_db, "Mean SNR (dB)");
  cmd->add_option("--sigma1", cfg.sigma1_db, "Spread of the per-mixture SNR (dB)");
  cmd->add_option("--sigma2", cfg.sigma2_db, "Spread of per-speaker SNRs (dB)");
  cmd->add_option("--sample-rate", cfg.sample_rate, "Output sample rate");
}

speval::DatasetInputs Load(const Inputs& in) {
  return {speval::LoadRirCatalog(in.rir_catalog), speval::LoadSpeechCorpus(in.speech_corpus),
          speval::LoadNoiseManifest(in.noise_manifest),
          speval::LoadActivityPatterns(in.patterns)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic reverberant multi-speaker mixture generator"};
  app.require_subcommand(1);

  Inputs inputs;
  speval::MixConfig cfg;
  std::vector<double> probs;
  std::size_t count = 0;
  std::string out_dir;
  unsigned threads = 0;

  auto* gen = app.add_subcommand("generate", "Render a dataset");
  AddInputOptions(gen, inputs);
  AddConfigOptions(gen, cfg, probs);
  gen->add_option("--count", count, "Number of mixtures")->required();
  gen->add_option("--out", out_dir, "Output directory")->required();
  gen->add_option("--threads", threads, "Rendering threads (0 = all cores)");

  auto* plan = app.add_subcommand("plan", "Print sampled plans as JSON lines");
  AddInputOptions(plan, inputs);
  AddConfigOptions(plan, cfg, probs);
  plan->add_option("--count", count, "Number of plans")->required();

  auto* demo = app.add_subcommand("demo-assets", "Write synthetic catalogs and audio");
  std::uint64_t demo_seed = 1;
  demo->add_option("--out", out_dir, "Output directory")->required();
  demo->add_option("--seed", demo_seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);

  return speval::tools::Guarded("speval-mixgen", [&]() -> int {
    if (probs.size() == 3) cfg.speaker_count_probs = {probs[0], probs[1], probs[2]};
    if (*demo) {
      speval::DeskAssetOptions opt;
      opt.seed = demo_seed;
      const auto paths = speval::WriteDeskAssets(out_dir, opt);
      std::cout << "--rir-catalog " << paths.rir_catalog.string() << " --speech-corpus "
                << paths.speech_corpus.string() << " --noise-manifest "
                << paths.noise_manifest.string() << " --patterns "
                << paths.activity_patterns.string() << '\n';
      return 0;
    }
    const speval::DatasetInputs data = Load(inputs);
    if (*plan) {
      speval::PlanSampler sampler(cfg, data.catalog, data.patterns, data.corpus, data.noises);
      std::mt19937_64 rng(cfg.seed);
      for (std::size_t i = 0; i < count; ++i) {
        const speval::MixturePlan p = sampler.Sample(rng);
        nlohmann::json speakers = nlohmann::json::array();
        for (const auto& s : p.speakers) {
          speakers.push_back({{"speaker_id", s.speaker_id},
                              {"position", s.rir.source_position_id},
                              {"snr_db", s.snr_db}});
        }
        std::cout << nlohmann::json{{"n_speakers", p.n_speakers},
                                    {"pattern_id", p.pattern_id},
                                    {"home", p.speakers.front().rir.home_id},
                                    {"room", p.speakers.front().rir.room_id},
                                    {"array", p.speakers.front().rir.array_id},
                                    {"channel", p.speakers.front().rir.channel_id},
                                    {"global_snr_db", p.global_snr_db},
                                    {"noise_segment_id", p.noise_segment_id},
                                    {"speakers", speakers}}
                         .dump()
                  << '\n';
      }
      return 0;
    }
    const auto entries = speval::GenerateDataset(cfg, data, count, out_dir, threads);
    std::size_t by_subset[4] = {0, 0, 0, 0};
    for (const auto& e : entries) {
      const int s = std::stoi(e.subset);
      if (s >= 0 && s <= 3) ++by_subset[s];
    }
    std::cout << "wrote " << entries.size() << " mixtures to " << out_dir << " (subsets 1/2/3: "
              << by_subset[1] << '/' << by_subset[2] << '/' << by_subset[3] << ")\n";
    return 0;
  });
}
