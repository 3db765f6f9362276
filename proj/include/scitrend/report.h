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

#ifndef SCITREND_REPORT_H_
#define SCITREND_REPORT_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scitrend/burst.h"
#include "scitrend/series.h"
#include "scitrend/trend.h"

namespace scitrend {

inline constexpr std::string_view kTrendCsvHeader =
    "topic,n,S,var_s,correction_factor,z,p,slope,trend,hot";
inline constexpr std::string_view kBurstCsvHeader =
    "topic,start_year,end_year,weight";

// Ranked trend table. slope and z carry 3 decimals, p two significant
// digits in scientific notation.
std::string RenderTrendCsv(const std::vector<TrendReportRow> &rows);
// Reads a table written by RenderTrendCsv back at its displayed precision.
std::vector<TrendReportRow> ParseTrendCsv(std::string_view csv);

struct TrendReport {
  Correction correction = Correction::kHamedRaoSignificantLags;
  double alpha = kDefaultAlpha;
  size_t top_k = 20;
  std::vector<TrendReportRow> ranked;
  // Every tested topic, in topic order.
  std::vector<std::pair<std::string, MannKendallResult>> tested;
  // Topics whose series was too short to test.
  std::vector<std::string> untestable;
};

std::string WriteTrendJson(const TrendReport &report);

std::string RenderBurstCsv(const std::vector<BurstInterval> &bursts);
std::string WriteBurstJson(const std::vector<BurstInterval> &bursts);
std::vector<BurstInterval> ParseBurstJson(std::string_view raw);

struct TimelineLayout {
  double width = 960;
  // Grows to fit the rows when smaller than needed.
  double height = 0;
  double margin_left = 240;
  double margin_right = 20;
  double margin_top = 20;
  double margin_bottom = 40;
  double row_height = 18;
  double min_thickness = 2;
  double max_thickness = 14;
  // Axis covers [year_min, year_max + 1). Zero means derive from the data;
  // set bounds are widened to cover every interval.
  int year_min = 0;
  int year_max = 0;

  double plot_width() const { return width - margin_left - margin_right; }
};

enum class TimelineOrder { kStartYear, kWeight };

// Gantt-style burst chart: one row per topic, one rectangle per interval
// spanning [start_year, end_year + 1), thickness linear in weight.
std::string RenderTimelineSvg(const std::vector<BurstInterval> &bursts,
                              const TimelineLayout &layout,
                              TimelineOrder order = TimelineOrder::kStartYear);

// Publication-count line chart for the named topics (all when empty).
std::string RenderSeriesSvg(const SeriesSet &series,
                            const std::vector<std::string> &topics,
                            bool cumulative);

}  // namespace scitrend

#endif  // SCITREND_REPORT_H_
