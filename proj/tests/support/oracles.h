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

// Independent reference computations used only by tests. Nothing here
// calls into the library code paths it is compared against.

#ifndef SCITREND_TESTS_SUPPORT_ORACLES_H_
#define SCITREND_TESTS_SUPPORT_ORACLES_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace scitrend::oracle {

// S recounted as concordant minus discordant pairs.
inline int64_t KendallS(const std::vector<double> &x) {
  int64_t concordant = 0;
  int64_t discordant = 0;
  for (size_t j = 1; j < x.size(); ++j) {
    for (size_t i = 0; i < j; ++i) {
      if (x[j] > x[i]) ++concordant;
      if (x[j] < x[i]) ++discordant;
    }
  }
  return concordant - discordant;
}

// Median of all pairwise slopes by full sort.
inline double MedianPairwiseSlope(const std::vector<double> &x) {
  std::vector<double> slopes;
  for (size_t i = 0; i < x.size(); ++i) {
    for (size_t j = i + 1; j < x.size(); ++j) {
      slopes.push_back((x[j] - x[i]) / static_cast<double>(j - i));
    }
  }
  std::sort(slopes.begin(), slopes.end());
  size_t m = slopes.size();
  return m % 2 ? slopes[m / 2] : (slopes[m / 2 - 1] + slopes[m / 2]) / 2.0;
}

// Standard normal CDF by composite Simpson integration of the density
// from 0 to |z|.
inline double NormalCdfByQuadrature(double z, int intervals = 20000) {
  const double a = std::fabs(z);
  if (a == 0.0) return 0.5;
  const double h = a / intervals;
  auto f = [](double t) { return std::exp(-0.5 * t * t); };
  double sum = f(0.0) + f(a);
  for (int i = 1; i < intervals; ++i) {
    sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
  }
  const double half = sum * h / 3.0 / std::sqrt(2.0 * M_PI);
  return z > 0 ? 0.5 + half : 0.5 - half;
}

// Two-state cost model written out directly from its definition.
inline double BinomialStateCost(int64_t r, int64_t d, double p) {
  double c = 0.0;
  if (r > 0) c += static_cast<double>(r) * std::log(p);
  if (d > r) c += static_cast<double>(d - r) * std::log(1.0 - p);
  return -c;
}

struct Enumerated {
  std::vector<int> states;
  double cost = std::numeric_limits<double>::infinity();
};

// Exhaustive search over all 2^T state sequences starting from state 0.
// cost[t][s] is the per-batch cost; entering state 1 costs up_cost. Among
// equal-cost sequences, prefers state 0 at the latest differing batch.
inline Enumerated EnumerateBurstStates(
    const std::vector<std::array<double, 2>> &cost, double up_cost) {
  const size_t T = cost.size();
  Enumerated best;
  for (uint64_t mask = 0; mask < (uint64_t{1} << T); ++mask) {
    std::vector<int> seq(T);
    for (size_t t = 0; t < T; ++t) seq[t] = (mask >> t) & 1;
    double c = 0.0;
    int prev = 0;
    for (size_t t = 0; t < T; ++t) {
      double step = (prev == 0 && seq[t] == 1) ? up_cost : 0.0;
      c = (c + step) + cost[t][seq[t]];
      prev = seq[t];
    }
    bool better = c < best.cost;
    if (!better && c == best.cost) {
      for (size_t t = T; t-- > 0;) {
        if (seq[t] != best.states[t]) {
          better = seq[t] < best.states[t];
          break;
        }
      }
    }
    if (better) {
      best.cost = c;
      best.states = seq;
    }
  }
  return best;
}

inline std::vector<double> Ar1Series(std::mt19937_64 &rng, size_t n,
                                     double phi) {
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> x(n);
  // Start from the stationary distribution.
  double prev = noise(rng) / std::sqrt(1.0 - phi * phi);
  for (size_t t = 0; t < n; ++t) {
    prev = phi * prev + noise(rng);
    x[t] = prev;
  }
  return x;
}

}  // namespace scitrend::oracle

#endif  // SCITREND_TESTS_SUPPORT_ORACLES_H_
