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

#ifndef SPEVAL_STATS_H_
#define SPEVAL_STATS_H_

#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace speval {

enum class RatingScale { kSig, kBak, kOvrl };

std::string_view RatingScaleName(RatingScale scale);
std::optional<RatingScale> ParseRatingScale(std::string_view name);

inline constexpr double kDefaultAlpha = 0.01;

// Subject x condition ratings (one row per subject).
struct VoteMatrix {
  std::vector<std::vector<double>> values;
  std::vector<std::string> subject_ids;
  std::vector<std::string> condition_ids;
  RatingScale scale = RatingScale::kOvrl;

  std::size_t subjects() const { return values.size(); }
  std::size_t conditions() const { return condition_ids.size(); }
};

struct AnovaResult {
  double f_value = 0.0;
  double df_effect = 0.0;
  double df_error = 0.0;
  double p_value = 1.0;
  double p_uncorrected = 1.0;
  double eta_squared = 0.0;  // SS_condition / (SS_condition + SS_error)
  double gg_epsilon = 1.0;
  double mauchly_w = 1.0;
  double mauchly_p = 1.0;
  bool correction_applied = false;

  double ss_condition = 0.0;
  double ss_subject = 0.0;
  double ss_error = 0.0;
  double ss_total = 0.0;
};

struct PairwiseComparison {
  std::string cond_a;
  std::string cond_b;
  double t_value = 0.0;
  double df = 0.0;
  double raw_p = 1.0;
  double adjusted_p = 1.0;
  bool significant_at_alpha = false;
};

struct PosthocResult {
  std::vector<PairwiseComparison> pairs;
};

// Mean of 1..5 Likert votes. Throws kEmptyVotes / kRangeViolation.
double ComputeMos(std::span<const int> votes);

// Sample Pearson correlation. Throws kDegenerateInput for fewer than 3 points,
// unequal lengths, or a zero-variance input.
double Pearson(std::span<const double> x, std::span<const double> y);

// Symmetric PCC matrix over the named columns (all of equal length), with a
// unit diagonal. Throws kMissingMetric when a name has no column.
std::vector<std::vector<double>> CorrelationMatrix(
    const std::map<std::string, std::vector<double>>& columns,
    std::span<const std::string> names);

// One-way repeated-measures ANOVA with Mauchly's sphericity test; when
// mauchly_p < alpha both dfs are scaled by the Greenhouse-Geisser epsilon.
AnovaResult RmAnova(const VoteMatrix& m, double alpha = kDefaultAlpha);

// Holm step-down adjustment; result is in input order.
std::vector<double> HolmAdjust(std::span<const double> raw_p);

// All pairwise two-sided paired t-tests with Holm-adjusted p values.
PosthocResult HolmPosthoc(const VoteMatrix& m, double alpha = kDefaultAlpha);

// Throws kIncompleteMatrix / kRangeViolation / kInvalidArgument.
void ValidateVoteMatrix(const VoteMatrix& m);

struct Rating {
  std::string subject_id;
  std::string condition_id;
  double value = 0.0;
};

// Per-subject condition means. Subjects and conditions are ordered by first
// appearance unless `condition_order` is given. Throws kIncompleteMatrix when
// a subject has no rating for some condition.
VoteMatrix BuildVoteMatrix(std::span<const Rating> ratings, RatingScale scale,
                           std::span<const std::string> condition_order = {});

// CSV with header `subject_id,<cond>,...`; one row per subject.
VoteMatrix ReadVoteMatrixCsv(std::istream& in, RatingScale scale);

}  // namespace speval

#endif  // SPEVAL_STATS_H_
