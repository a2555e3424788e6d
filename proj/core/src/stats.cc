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

#include "speval/stats.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "speval/error.h"
#include "speval/special_functions.h"

namespace speval {

namespace {

Eigen::MatrixXd ToEigen(const VoteMatrix& m) {
  Eigen::MatrixXd y(m.subjects(), m.conditions());
  for (std::size_t i = 0; i < m.subjects(); ++i) {
    for (std::size_t j = 0; j < m.conditions(); ++j) y(i, j) = m.values[i][j];
  }
  return y;
}

// Orthonormal Helmert contrasts, (k - 1) x k.
Eigen::MatrixXd HelmertContrasts(Eigen::Index k) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k - 1, k);
  for (Eigen::Index r = 0; r < k - 1; ++r) {
    const double n = static_cast<double>(r + 1);
    const double norm = std::sqrt(n * (n + 1.0));
    for (Eigen::Index j = 0; j <= r; ++j) c(r, j) = 1.0 / norm;
    c(r, r + 1) = -n / norm;
  }
  return c;
}

struct Sphericity {
  double w = 1.0;
  double p = 1.0;
  double epsilon = 1.0;
};

Sphericity TestSphericity(const Eigen::MatrixXd& y) {
  const Eigen::Index n = y.rows();
  const Eigen::Index k = y.cols();
  Sphericity out;
  if (k <= 2) return out;

  const Eigen::MatrixXd centered = y.rowwise() - y.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
  const Eigen::MatrixXd c = HelmertContrasts(k);
  const Eigen::MatrixXd transformed = c * cov * c.transpose();
  const double p = static_cast<double>(k - 1);
  const double trace = transformed.trace();
  if (!(trace > 0.0)) return out;  // no within-subject variability at all

  out.epsilon = trace * trace / (p * (transformed * transformed).trace());
  out.epsilon = std::clamp(out.epsilon, 1.0 / p, 1.0);

  const double det = transformed.determinant();
  out.w = det > 0.0 ? det / std::pow(trace / p, p) : 0.0;
  out.w = std::clamp(out.w, 0.0, 1.0);
  const double dof = p * (p + 1.0) / 2.0 - 1.0;
  const double correction =
      1.0 - (2.0 * p * p + p + 2.0) / (6.0 * p * static_cast<double>(n - 1));
  if (out.w <= 0.0) {
    out.p = 0.0;
  } else {
    const double chi2 = -correction * static_cast<double>(n - 1) * std::log(out.w);
    out.p = ChiSquareSf(chi2, dof);
  }
  return out;
}

}  // namespace

std::string_view RatingScaleName(RatingScale scale) {
  switch (scale) {
    case RatingScale::kSig: return "SIG";
    case RatingScale::kBak: return "BAK";
    case RatingScale::kOvrl: return "OVRL";
  }
  return "?";
}

std::optional<RatingScale> ParseRatingScale(std::string_view name) {
  if (name == "SIG") return RatingScale::kSig;
  if (name == "BAK") return RatingScale::kBak;
  if (name == "OVRL") return RatingScale::kOvrl;
  return std::nullopt;
}

double ComputeMos(std::span<const int> votes) {
  if (votes.empty()) throw Error(ErrorCode::kEmptyVotes, "no votes");
  double sum = 0.0;
  for (int v : votes) {
    if (v < 1 || v > 5) {
      throw Error(ErrorCode::kRangeViolation, "vote " + std::to_string(v) + " not in 1..5");
    }
    sum += v;
  }
  return sum / static_cast<double>(votes.size());
}

double Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw Error(ErrorCode::kDegenerateInput, "need two equal-length series of >= 3 points");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::kDegenerateInput, "zero variance input");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<std::vector<double>> CorrelationMatrix(
    const std::map<std::string, std::vector<double>>& columns,
    std::span<const std::string> names) {
  std::vector<const std::vector<double>*> cols;
  for (const std::string& name : names) {
    const auto it = columns.find(name);
    if (it == columns.end()) throw Error(ErrorCode::kMissingMetric, name);
    cols.push_back(&it->second);
  }
  const std::size_t m = cols.size();
  std::vector<std::vector<double>> r(m, std::vector<double>(m, 1.0));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      r[a][b] = r[b][a] = Pearson(*cols[a], *cols[b]);
    }
  }
  return r;
}

void ValidateVoteMatrix(const VoteMatrix& m) {
  if (m.conditions() < 2 || m.subjects() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need >= 2 subjects and >= 2 conditions");
  }
  for (const auto& row : m.values) {
    if (row.size() != m.conditions()) {
      throw Error(ErrorCode::kIncompleteMatrix, "row length differs from condition count");
    }
    for (double v : row) {
      if (!std::isfinite(v)) throw Error(ErrorCode::kIncompleteMatrix, "missing cell");
      if (v < 1.0 || v > 5.0) {
        throw Error(ErrorCode::kRangeViolation, "rating outside [1, 5]");
      }
    }
  }
}

AnovaResult RmAnova(const VoteMatrix& m, double alpha) {
  ValidateVoteMatrix(m);
  const Eigen::MatrixXd y = ToEigen(m);
  const auto s = static_cast<double>(y.rows());
  const auto k = static_cast<double>(y.cols());
  const double grand = y.mean();
  const Eigen::VectorXd cond_means = y.colwise().mean();
  const Eigen::VectorXd subj_means = y.rowwise().mean();

  AnovaResult r;
  r.ss_condition = s * (cond_means.array() - grand).square().sum();
  r.ss_subject = k * (subj_means.array() - grand).square().sum();
  r.ss_total = (y.array() - grand).square().sum();
  double ss_error = 0.0;
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
      const double e = y(i, j) - subj_means(i) - cond_means(j) + grand;
      ss_error += e * e;
    }
  }
  r.ss_error = ss_error;

  const double df_c = k - 1.0;
  const double df_e = (k - 1.0) * (s - 1.0);
  // Relative threshold guards against rounding residue in constant matrices.
  const double scale = std::max(r.ss_total, 1.0);
  const bool no_effect = r.ss_condition <= 1e-12 * scale;
  const bool no_error = r.ss_error <= 1e-12 * scale;
  if (no_effect) {
    r.f_value = 0.0;
    r.p_value = r.p_uncorrected = 1.0;
    r.eta_squared = 0.0;
    r.df_effect = df_c;
    r.df_error = df_e;
    if (!no_error) {
      const Sphericity sph = TestSphericity(y);
      r.mauchly_w = sph.w;
      r.mauchly_p = sph.p;
      r.gg_epsilon = sph.epsilon;
    }
    return r;
  }
  if (no_error) {
    throw Error(ErrorCode::kDegenerateVariance,
                "zero error variance: F is undefined");
  }
  r.f_value = (r.ss_condition / df_c) / (r.ss_error / df_e);
  r.eta_squared = r.ss_condition / (r.ss_condition + r.ss_error);

  const Sphericity sph = TestSphericity(y);
  r.mauchly_w = sph.w;
  r.mauchly_p = sph.p;
  r.gg_epsilon = sph.epsilon;
  r.p_uncorrected = FDistributionSf(r.f_value, df_c, df_e);
  r.correction_applied = y.cols() > 2 && sph.p < alpha;
  const double eps = r.correction_applied ? sph.epsilon : 1.0;
  r.df_effect = df_c * eps;
  r.df_error = df_e * eps;
  r.p_value = r.correction_applied ? FDistributionSf(r.f_value, r.df_effect, r.df_error)
                                   : r.p_uncorrected;
  return r;
}

std::vector<double> HolmAdjust(std::span<const double> raw_p) {
  const std::size_t m = raw_p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return raw_p[a] < raw_p[b]; });
  std::vector<double> adjusted(m);
  double running = 0.0;
  for (std::size_t rank = 0; rank < m; ++rank) {
    const double candidate =
        std::min(1.0, static_cast<double>(m - rank) * raw_p[order[rank]]);
    running = std::max(running, candidate);
    adjusted[order[rank]] = running;
  }
  return adjusted;
}

PosthocResult HolmPosthoc(const VoteMatrix& m, double alpha) {
  ValidateVoteMatrix(m);
  const std::size_t k = m.conditions();
  const auto n = static_cast<double>(m.subjects());
  PosthocResult out;
  std::vector<double> raw;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      double mean = 0.0;
      for (const auto& row : m.values) mean += row[a] - row[b];
      mean /= n;
      double ss = 0.0;
      for (const auto& row : m.values) {
        const double d = row[a] - row[b] - mean;
        ss += d * d;
      }
      const double sd = std::sqrt(ss / (n - 1.0));
      PairwiseComparison pc;
      pc.cond_a = m.condition_ids[a];
      pc.cond_b = m.condition_ids[b];
      pc.df = n - 1.0;
      if (sd == 0.0) {
        // Constant differences: identical conditions carry no evidence, any
        // other constant shift is infinitely significant.
        pc.t_value = mean == 0.0 ? 0.0 : std::copysign(INFINITY, mean);
        pc.raw_p = mean == 0.0 ? 1.0 : 0.0;
      } else {
        pc.t_value = mean / (sd / std::sqrt(n));
        pc.raw_p = StudentTTwoSidedP(pc.t_value, pc.df);
      }
      raw.push_back(pc.raw_p);
      out.pairs.push_back(pc);
    }
  }
  const std::vector<double> adjusted = HolmAdjust(raw);
  for (std::size_t i = 0; i < out.pairs.size(); ++i) {
    out.pairs[i].adjusted_p = adjusted[i];
    out.pairs[i].significant_at_alpha = adjusted[i] < alpha;
  }
  return out;
}

VoteMatrix BuildVoteMatrix(std::span<const Rating> ratings, RatingScale scale,
                           std::span<const std::string> condition_order) {
  VoteMatrix m;
  m.scale = scale;
  std::map<std::string, std::size_t> subject_index;
  std::map<std::string, std::size_t> condition_index;
  for (const std::string& c : condition_order) {
    condition_index.emplace(c, m.condition_ids.size());
    m.condition_ids.push_back(c);
  }
  for (const Rating& r : ratings) {
    if (subject_index.emplace(r.subject_id, m.subject_ids.size()).second) {
      m.subject_ids.push_back(r.subject_id);
    }
    if (condition_order.empty() &&
        condition_index.emplace(r.condition_id, m.condition_ids.size()).second) {
      m.condition_ids.push_back(r.condition_id);
    }
  }
  std::vector<std::vector<double>> sums(m.subject_ids.size(),
                                        std::vector<double>(m.condition_ids.size(), 0.0));
  std::vector<std::vector<int>> counts(m.subject_ids.size(),
                                       std::vector<int>(m.condition_ids.size(), 0));
  for (const Rating& r : ratings) {
    const auto c = condition_index.find(r.condition_id);
    if (c == condition_index.end()) continue;
    const std::size_t i = subject_index.at(r.subject_id);
    sums[i][c->second] += r.value;
    ++counts[i][c->second];
  }
  m.values = sums;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    for (std::size_t j = 0; j < sums[i].size(); ++j) {
      if (counts[i][j] == 0) {
        throw Error(ErrorCode::kIncompleteMatrix,
                    "subject " + m.subject_ids[i] + " has no rating for " +
                        m.condition_ids[j]);
      }
      m.values[i][j] = sums[i][j] / counts[i][j];
    }
  }
  return m;
}

VoteMatrix ReadVoteMatrixCsv(std::istream& in, RatingScale scale) {
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      field.erase(0, field.find_first_not_of(" \t\r"));
      field.erase(field.find_last_not_of(" \t\r") + 1);
      out.push_back(field);
    }
    return out;
  };
  VoteMatrix m;
  m.scale = scale;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> fields = split(line);
    if (m.condition_ids.empty()) {
      if (fields.size() < 3) {
        throw Error(ErrorCode::kParseError, "header needs subject_id and >= 2 conditions");
      }
      m.condition_ids.assign(fields.begin() + 1, fields.end());
      continue;
    }
    if (fields.size() != m.condition_ids.size() + 1) {
      throw Error(ErrorCode::kIncompleteMatrix,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(m.condition_ids.size() + 1) + " fields");
    }
    m.subject_ids.push_back(fields[0]);
    std::vector<double> row;
    for (std::size_t j = 1; j < fields.size(); ++j) {
      if (fields[j].empty()) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      try {
        std::size_t used = 0;
        row.push_back(std::stod(fields[j], &used));
        if (used != fields[j].size()) throw std::invalid_argument(fields[j]);
      } catch (const std::exception&) {
        throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) +
                                                ": bad rating '" + fields[j] + "'");
      }
    }
    m.values.push_back(std::move(row));
  }
  return m;
}

}  // namespace speval
