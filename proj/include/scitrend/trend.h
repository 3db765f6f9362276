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

#ifndef SCITREND_TREND_H_
#define SCITREND_TREND_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scitrend {

enum class Correction {
  kNone,
  kHamedRaoAllLags,
  kHamedRaoSignificantLags,
};

enum class TrendClass { kIncreasing, kDecreasing, kNoTrend };

std::string_view ToString(Correction c);
std::string_view ToString(TrendClass t);
// Accepts "none", "hamed_rao_all_lags", "hamed_rao_significant_lags".
Correction ParseCorrection(std::string_view name);
TrendClass ParseTrendClass(std::string_view name);

struct MannKendallResult {
  size_t n = 0;
  int64_t s = 0;
  // Tie-corrected variance of S, already multiplied by correction_factor.
  double var_s = 0.0;
  double correction_factor = 1.0;
  double z = 0.0;
  // Two-sided.
  double p = 1.0;
  // Theil-Sen slope in units per year.
  double slope = 0.0;
  TrendClass trend = TrendClass::kNoTrend;
};

struct TrendReportRow {
  std::string topic;
  MannKendallResult result;
  bool hot = false;
};

class TrendError : public std::runtime_error {
 public:
  enum class Kind { kInsufficientData, kLagOutOfRange };

  TrendError(Kind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

constexpr double kDefaultAlpha = 0.05;
constexpr double kMinCorrectionFactor = 1e-9;
constexpr size_t kMinTrendLength = 4;

// Mann-Kendall test with tie correction, optional Hamed-Rao variance
// correction and continuity-corrected z. A fully tied series yields z = 0,
// p = 1. Throws kInsufficientData below four points.
MannKendallResult MannKendall(
    std::span<const double> series,
    Correction correction = Correction::kHamedRaoSignificantLags,
    double alpha = kDefaultAlpha);

// Average ranks (1-based), ties share the mean of their positions.
std::vector<double> AverageRanks(std::span<const double> series);

// Lag-k autocorrelation of the ranks of `series`: mean-centred lag-k
// autocovariance over the rank variance. A constant series gives 0.
double RankAutocorrelation(std::span<const double> series, size_t lag);

// Variance inflation factor n/n* built from rank autocorrelations.
// rho[k-1] is the autocorrelation at lag k; lags beyond n-3 contribute
// nothing. kHamedRaoSignificantLags keeps only lags with
// |rho_k| > z_{1-alpha/2} / sqrt(n). Floored at kMinCorrectionFactor.
double HamedRaoFactorFromAutocorrelations(size_t n,
                                          std::span<const double> rho,
                                          Correction mode, double alpha);

// Factor for a series: rank autocorrelations of the raw series fed to the
// function above.
double HamedRaoFactor(std::span<const double> series, Correction mode,
                      double alpha = kDefaultAlpha);

// Median of the pairwise slopes (x_j - x_i) / (j - i) over unit time steps.
double TheilSen(std::span<const double> series);

double NormalCdf(double z);
// Inverse of NormalCdf for p in (0, 1).
double NormalQuantile(double p);

// Keeps increasing topics, orders them by slope (then z, then name), keeps
// the first top_k and marks as hot those whose slope exceeds the mean slope
// of the kept rows.
std::vector<TrendReportRow> ClassifyAndRank(
    const std::vector<std::pair<std::string, MannKendallResult>> &rows,
    size_t top_k);

}  // namespace scitrend

#endif  // SCITREND_TREND_H_
