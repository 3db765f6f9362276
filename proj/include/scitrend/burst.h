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

#ifndef SCITREND_BURST_H_
#define SCITREND_BURST_H_

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "scitrend/series.h"

namespace scitrend {

// Two-state automaton tuning: burst rate is s times the base rate, entering
// the burst state costs gamma * ln(T).
struct BurstParams {
  double s = 2.0;
  double gamma = 1.0;
  double p1_cap = 0.9999;

  void Validate() const;
};

struct BurstInterval {
  std::string topic;
  int start_year = 0;
  // Inclusive.
  int end_year = 0;
  double weight = 0.0;

  bool operator==(const BurstInterval &) const = default;
};

class BurstError : public std::runtime_error {
 public:
  enum class Kind { kEmptySeries, kCountExceedsTotal, kInvalidParams };

  BurstError(Kind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Per-batch costs of the two states. cost[t][i] is the negative binomial
// log-likelihood of batch t under state i without the binomial coefficient;
// batches with a zero total have zero cost and are inactive.
struct BurstModel {
  double p0 = 0.0;
  double p1 = 0.0;
  double up_cost = 0.0;
  std::vector<std::array<double, 2>> cost;
  std::vector<bool> active;
  // False when no burst state is meaningful (no events, or p1 <= p0).
  bool can_burst = false;
};

BurstModel BuildBurstModel(std::span<const int64_t> counts,
                           std::span<const int64_t> totals,
                           const BurstParams &params);

struct StatePath {
  // One entry per batch. An inactive batch is 1 only when the nearest active
  // batches on both sides are 1, so maximal runs of 1 are the bursts.
  std::vector<int> states;
  double cost = 0.0;
};

// Minimum-cost state sequence by dynamic programming over active batches,
// starting from state 0. Equal costs resolve toward state 0, scanning from
// the last batch backwards.
StatePath OptimalStates(const BurstModel &model);

// Burst intervals for one series whose first batch is year_min.
std::vector<BurstInterval> DetectBursts(std::span<const int64_t> counts,
                                        std::span<const int64_t> totals,
                                        const BurstParams &params,
                                        int year_min = 0,
                                        const std::string &topic = {});

constexpr size_t kDefaultBurstTopN = 100;

// Runs DetectBursts on every topic against the corpus totals. When top_n is
// nonzero only the top_n topics by largest interval weight are kept. Output
// is ordered by start year, then weight descending, then topic.
std::vector<BurstInterval> BurstTable(const SeriesSet &series,
                                      const BurstParams &params,
                                      size_t top_n = kDefaultBurstTopN);

}  // namespace scitrend

#endif  // SCITREND_BURST_H_
