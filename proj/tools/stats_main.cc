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

// speval-stats: repeated-measures analysis of listening-test ratings.
//
//   speval-stats anova --votes ovrl.csv --scale OVRL [--alpha 0.01]
//
// The CSV has one row per subject: subject_id,<condition>,...

#include <cstdio>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "speval/error.h"
#include "speval/stats.h"
#include "tool_main.h"

int main(int argc, char** argv) {
  CLI::App app{"One-way repeated-measures ANOVA with Holm post-hoc tests"};
  app.require_subcommand(1);
  auto* anova = app.add_subcommand("anova", "RM-ANOVA and pairwise comparisons");
  std::string votes_path;
  std::string scale_name = "OVRL";
  double alpha = speval::kDefaultAlpha;
  anova->add_option("--votes", votes_path, "Subject x condition CSV")->required();
  anova->add_option("--scale", scale_name, "SIG, BAK or OVRL")
      ->check(CLI::IsMember({"SIG", "BAK", "OVRL"}));
  anova->add_option("--alpha", alpha, "Significance level");
  CLI11_PARSE(app, argc, argv);

  return speval::tools::Guarded("speval-stats", [&]() -> int {
    std::ifstream in(votes_path);
    if (!in) throw speval::Error(speval::ErrorCode::kFileNotFound, "cannot open " + votes_path);
    const speval::VoteMatrix m = speval::ReadVoteMatrixCsv(in, *speval::ParseRatingScale(scale_name));
    const speval::AnovaResult r = speval::RmAnova(m, alpha);
    std::printf("%s: F(%.3f, %.3f) = %.4f, p = %.3g, eta2 = %.4f\n", scale_name.c_str(),
                r.df_effect, r.df_error, r.f_value, r.p_value, r.eta_squared);
    std::printf("Mauchly W = %.4f (p = %.3g), GG epsilon = %.4f, corrected: %s\n", r.mauchly_w,
                r.mauchly_p, r.gg_epsilon, r.correction_applied ? "yes" : "no");
    const speval::PosthocResult post = speval::HolmPosthoc(m, alpha);
    for (const auto& c : post.pairs) {
      std::printf("  %-12s vs %-12s t(%g) = %8.3f  p_holm = %.3g%s\n", c.cond_a.c_str(),
                  c.cond_b.c_str(), c.df, c.t_value, c.adjusted_p,
                  c.significant_at_alpha ? " *" : "");
    }
    return 0;
  });
}
