// Copyright 2026 The scitrend Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "scitrend/trend.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace scitrend {

namespace {

void RequireLength(size_t n, size_t min, const char *what) {
  if (n < min) {
    throw TrendError(TrendError::Kind::kInsufficientData,
                     std::string(what) + " needs at least " +
                         std::to_string(min) + " points, got " +
                         std::to_string(n));
  }
}

int Sign(double v) { return (v > 0) - (v < 0); }

}  // namespace

std::string_view ToString(Correction c) {
  switch (c) {
    case Correction::kNone:
      return "none";
    case Correction::kHamedRaoAllLags:
      return "hamed_rao_all_lags";
    case Correction::kHamedRaoSignificantLags:
      return "hamed_rao_significant_lags";
  }
  return "none";
}

std::string_view ToString(TrendClass t) {
  switch (t) {
    case TrendClass::kIncreasing:
      return "increasing";
    case TrendClass::kDecreasing:
      return "decreasing";
    case TrendClass::kNoTrend:
      return "no_trend";
  }
  return "no_trend";
}

Correction ParseCorrection(std::string_view name) {
  for (Correction c : {Correction::kNone, Correction::kHamedRaoAllLags,
                       Correction::kHamedRaoSignificantLags}) {
    if (ToString(c) == name) return c;
  }
  throw std::invalid_argument("unknown correction mode '" + std::string(name) +
                              "'");
}

TrendClass ParseTrendClass(std::string_view name) {
  for (TrendClass t : {TrendClass::kIncreasing, TrendClass::kDecreasing,
                       TrendClass::kNoTrend}) {
    if (ToString(t) == name) return t;
  }
  throw std::invalid_argument("unknown trend class '" + std::string(name) +
                              "'");
}

MannKendallResult MannKendall(std::span<const double> series,
                              Correction correction, double alpha) {
  const size_t n = series.size();
  RequireLength(n, kMinTrendLength, "Mann-Kendall test");

  MannKendallResult r;
  r.n = n;
  for (size_t i = 0; i + 1 < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) r.s += Sign(series[j] - series[i]);
  }

  // Tie groups shrink the variance of S.
  std::vector<double> sorted(series.begin(), series.end());
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    double t = static_cast<double>(j - i);
    tie_term += t * (t - 1) * (2 * t + 5);
    i = j;
  }
  const double nd = static_cast<double>(n);
  r.var_s = (nd * (nd - 1) * (2 * nd + 5) - tie_term) / 18.0;

  r.correction_factor = correction == Correction::kNone
                            ? 1.0
                            : HamedRaoFactor(series, correction, alpha);
  r.var_s *= r.correction_factor;

  if (r.var_s <= 0.0 || r.s == 0) {
    r.z = 0.0;
  } else if (r.s > 0) {
    r.z = (static_cast<double>(r.s) - 1.0) / std::sqrt(r.var_s);
  } else {
    r.z = (static_cast<double>(r.s) + 1.0) / std::sqrt(r.var_s);
  }
  r.p = std::clamp(2.0 * (1.0 - NormalCdf(std::fabs(r.z))), 0.0, 1.0);
  if (r.p < alpha && r.z > 0) {
    r.trend = TrendClass::kIncreasing;
  } else if (r.p < alpha && r.z < 0) {
    r.trend = TrendClass::kDecreasing;
  }
  r.slope = TheilSen(series);
  return r;
}

std::vector<double> AverageRanks(std::span<const double> series) {
  const size_t n = series.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return series[a] < series[b]; });
  std::vector<double> ranks(n);
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && series[order[j]] == series[order[i]]) ++j;
    double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double RankAutocorrelation(std::span<const double> series, size_t lag) {
  const size_t n = series.size();
  if (lag < 1 || lag >= n) {
    throw TrendError(TrendError::Kind::kLagOutOfRange,
                     "lag " + std::to_string(lag) + " outside [1, " +
                         std::to_string(n > 0 ? n - 1 : 0) + "]");
  }
  std::vector<double> ranks = AverageRanks(series);
  double mean = std::accumulate(ranks.begin(), ranks.end(), 0.0) / n;
  double denom = 0.0;
  for (double r : ranks) denom += (r - mean) * (r - mean);
  if (denom == 0.0) return 0.0;
  double num = 0.0;
  for (size_t t = 0; t + lag < n; ++t) {
    num += (ranks[t] - mean) * (ranks[t + lag] - mean);
  }
  return num / denom;
}

double HamedRaoFactorFromAutocorrelations(size_t n,
                                          std::span<const double> rho,
                                          Correction mode, double alpha) {
  RequireLength(n, kMinTrendLength, "Hamed-Rao correction");
  if (mode == Correction::kNone) return 1.0;
  const double nd = static_cast<double>(n);
  const double bound = NormalQuantile(1.0 - alpha / 2.0) / std::sqrt(nd);
  double sum = 0.0;
  for (size_t k = 1; k <= std::min(rho.size(), n - 3); ++k) {
    double r = rho[k - 1];
    if (mode == Correction::kHamedRaoSignificantLags && !(std::fabs(r) > bound)) {
      continue;
    }
    double m = static_cast<double>(n - k);
    sum += m * (m - 1) * (m - 2) * r;
  }
  double factor = 1.0 + 2.0 / (nd * (nd - 1) * (nd - 2)) * sum;
  return std::max(factor, kMinCorrectionFactor);
}

double HamedRaoFactor(std::span<const double> series, Correction mode,
                      double alpha) {
  const size_t n = series.size();
  RequireLength(n, kMinTrendLength, "Hamed-Rao correction");
  if (mode == Correction::kNone) return 1.0;

  // Ranks of the raw series. Removing a Theil-Sen trend first biases the
  // residual autocorrelations negative and inflates the false-alarm rate.
  std::vector<double> rho(n - 1);
  for (size_t k = 1; k < n; ++k) rho[k - 1] = RankAutocorrelation(series, k);
  return HamedRaoFactorFromAutocorrelations(n, rho, mode, alpha);
}

double TheilSen(std::span<const double> series) {
  const size_t n = series.size();
  RequireLength(n, 2, "Theil-Sen slope");
  std::vector<double> slopes;
  slopes.reserve(n * (n - 1) / 2);
  for (size_t i = 0; i + 1 < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      slopes.push_back((series[j] - series[i]) / static_cast<double>(j - i));
    }
  }
  const size_t m = slopes.size();
  auto mid = slopes.begin() + m / 2;
  std::nth_element(slopes.begin(), mid, slopes.end());
  if (m % 2 == 1) return *mid;
  double upper = *mid;
  double lower = *std::max_element(slopes.begin(), mid);
  return (lower + upper) / 2.0;
}

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double NormalQuantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("quantile probability must be in (0, 1)");
  }
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    double mid = 0.5 * (lo + hi);
    (NormalCdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<TrendReportRow> ClassifyAndRank(
    const std::vector<std::pair<std::string, MannKendallResult>> &rows,
    size_t top_k) {
  if (top_k < 1) throw std::invalid_argument("top_k must be at least 1");
  std::vector<TrendReportRow> out;
  for (const auto &[topic, result] : rows) {
    if (result.trend == TrendClass::kIncreasing) {
      out.push_back(TrendReportRow{topic, result, false});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    if (a.result.slope != b.result.slope) return a.result.slope > b.result.slope;
    if (a.result.z != b.result.z) return a.result.z > b.result.z;
    return a.topic < b.topic;
  });
  if (out.size() > top_k) out.resize(top_k);
  if (out.empty()) return out;
  double mean = 0.0;
  for (const auto &row : out) mean += row.result.slope;
  mean /= static_cast<double>(out.size());
  for (auto &row : out) row.hot = row.result.slope > mean;
  return out;
}

}  // namespace scitrend
