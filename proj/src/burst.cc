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

#include "scitrend/burst.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "parallel.h"

namespace scitrend {

namespace {

double StateCost(int64_t r, int64_t d, double p) {
  double cost = 0.0;
  if (r > 0) cost -= static_cast<double>(r) * std::log(p);
  if (d - r > 0) cost -= static_cast<double>(d - r) * std::log1p(-p);
  return cost;
}

}  // namespace

void BurstParams::Validate() const {
  if (!(s > 1.0)) {
    throw BurstError(BurstError::Kind::kInvalidParams, "s must exceed 1");
  }
  if (!(gamma >= 0.0)) {
    throw BurstError(BurstError::Kind::kInvalidParams,
                     "gamma must be nonnegative");
  }
  if (!(p1_cap > 0.0 && p1_cap < 1.0)) {
    throw BurstError(BurstError::Kind::kInvalidParams,
                     "p1_cap must be in (0, 1)");
  }
}

BurstModel BuildBurstModel(std::span<const int64_t> counts,
                           std::span<const int64_t> totals,
                           const BurstParams &params) {
  params.Validate();
  if (counts.empty() || counts.size() != totals.size()) {
    throw BurstError(BurstError::Kind::kEmptySeries,
                     "counts and totals must be non-empty and equally long");
  }
  int64_t sum_r = 0;
  int64_t sum_d = 0;
  for (size_t t = 0; t < counts.size(); ++t) {
    if (counts[t] < 0 || counts[t] > totals[t]) {
      throw BurstError(BurstError::Kind::kCountExceedsTotal,
                       "batch " + std::to_string(t) + ": count " +
                           std::to_string(counts[t]) + " outside [0, " +
                           std::to_string(totals[t]) + "]");
    }
    sum_r += counts[t];
    sum_d += totals[t];
  }
  if (sum_d == 0) {
    throw BurstError(BurstError::Kind::kEmptySeries, "all totals are zero");
  }

  BurstModel m;
  m.p0 = static_cast<double>(sum_r) / static_cast<double>(sum_d);
  m.p1 = std::min(params.s * m.p0, params.p1_cap);
  m.up_cost = params.gamma * std::log(static_cast<double>(counts.size()));
  m.can_burst = sum_r > 0 && m.p1 > m.p0;
  m.cost.resize(counts.size(), {0.0, 0.0});
  m.active.resize(counts.size());
  for (size_t t = 0; t < counts.size(); ++t) {
    m.active[t] = totals[t] > 0;
    if (!m.active[t]) continue;
    m.cost[t][0] = StateCost(counts[t], totals[t], m.p0);
    if (m.can_burst) m.cost[t][1] = StateCost(counts[t], totals[t], m.p1);
  }
  return m;
}

StatePath OptimalStates(const BurstModel &model) {
  const size_t T = model.cost.size();
  StatePath path;
  path.states.assign(T, 0);
  if (!model.can_burst) {
    for (size_t t = 0; t < T; ++t) path.cost += model.cost[t][0];
    return path;
  }

  std::vector<size_t> steps;
  for (size_t t = 0; t < T; ++t) {
    if (model.active[t]) steps.push_back(t);
  }
  // best[k][s]: cheapest cost of the first k+1 active batches ending in s.
  std::vector<std::array<double, 2>> best(steps.size());
  std::vector<std::array<int, 2>> from(steps.size());
  for (size_t k = 0; k < steps.size(); ++k) {
    const auto &c = model.cost[steps[k]];
    for (int s = 0; s < 2; ++s) {
      if (k == 0) {
        best[k][s] = (0.0 + (s == 1 ? model.up_cost : 0.0)) + c[s];
        from[k][s] = 0;
        continue;
      }
      double via0 = best[k - 1][0] + (s == 1 ? model.up_cost : 0.0);
      double via1 = best[k - 1][1] + 0.0;
      from[k][s] = via0 <= via1 ? 0 : 1;
      best[k][s] = std::min(via0, via1) + c[s];
    }
  }
  if (steps.empty()) return path;

  std::vector<int> active_states(steps.size());
  int s = best.back()[0] <= best.back()[1] ? 0 : 1;
  path.cost = best.back()[s];
  for (size_t k = steps.size(); k-- > 0;) {
    active_states[k] = s;
    s = from[k][s];
  }
  for (size_t k = 0; k < steps.size(); ++k) {
    path.states[steps[k]] = active_states[k];
    if (k + 1 < steps.size() && active_states[k] == 1 &&
        active_states[k + 1] == 1) {
      for (size_t t = steps[k] + 1; t < steps[k + 1]; ++t) path.states[t] = 1;
    }
  }
  return path;
}

std::vector<BurstInterval> DetectBursts(std::span<const int64_t> counts,
                                        std::span<const int64_t> totals,
                                        const BurstParams &params,
                                        int year_min,
                                        const std::string &topic) {
  BurstModel model = BuildBurstModel(counts, totals, params);
  StatePath path = OptimalStates(model);
  std::vector<BurstInterval> out;
  const size_t T = path.states.size();
  for (size_t t = 0; t < T;) {
    if (path.states[t] == 0) {
      ++t;
      continue;
    }
    size_t end = t;
    double weight = 0.0;
    while (end < T && path.states[end] == 1) {
      weight += model.cost[end][0] - model.cost[end][1];
      ++end;
    }
    out.push_back(BurstInterval{topic, year_min + static_cast<int>(t),
                                year_min + static_cast<int>(end - 1), weight});
    t = end;
  }
  return out;
}

std::vector<BurstInterval> BurstTable(const SeriesSet &series,
                                      const BurstParams &params,
                                      size_t top_n) {
  params.Validate();
  const auto &topics = series.topics;
  std::vector<std::vector<BurstInterval>> per_topic(topics.size());
  ParallelFor(topics.size(), [&](size_t i) {
    per_topic[i] = DetectBursts(topics[i].counts, series.totals.totals, params,
                                series.totals.year_min, topics[i].topic);
  });

  std::vector<size_t> bursting;
  std::vector<double> peak(topics.size(), 0.0);
  for (size_t i = 0; i < topics.size(); ++i) {
    if (per_topic[i].empty()) continue;
    bursting.push_back(i);
    for (const auto &b : per_topic[i]) peak[i] = std::max(peak[i], b.weight);
  }
  if (top_n > 0 && bursting.size() > top_n) {
    std::stable_sort(bursting.begin(), bursting.end(), [&](size_t a, size_t b) {
      if (peak[a] != peak[b]) return peak[a] > peak[b];
      return topics[a].topic < topics[b].topic;
    });
    bursting.resize(top_n);
  }

  std::vector<BurstInterval> out;
  for (size_t i : bursting) {
    out.insert(out.end(), per_topic[i].begin(), per_topic[i].end());
  }
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    if (a.start_year != b.start_year) return a.start_year < b.start_year;
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.topic < b.topic;
  });
  return out;
}

}  // namespace scitrend
