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

#include "scitrend/report.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "json.hpp"
#include "scitrend/text.h"

namespace scitrend {

namespace {

using Json = nlohmann::ordered_json;

std::string Format(const char *fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::string XmlEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string Px(double v) { return Format("%.2f", v); }

Json ResultJson(const std::string &topic, const MannKendallResult &r) {
  Json j;
  j["topic"] = topic;
  j["n"] = r.n;
  j["S"] = r.s;
  j["var_s"] = r.var_s;
  j["correction_factor"] = r.correction_factor;
  j["z"] = r.z;
  j["p"] = r.p;
  j["slope"] = r.slope;
  j["trend"] = ToString(r.trend);
  return j;
}

std::string SvgHeader(double width, double height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         Px(width) + "\" height=\"" + Px(height) + "\" viewBox=\"0 0 " +
         Px(width) + " " + Px(height) + "\">\n";
}

}  // namespace

std::string RenderTrendCsv(const std::vector<TrendReportRow> &rows) {
  std::string out(kTrendCsvHeader);
  out += '\n';
  for (const auto &row : rows) {
    const auto &r = row.result;
    out += CsvField(row.topic) + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.s) + ',' + Format("%.4f", r.var_s) + ',' +
           Format("%.4f", r.correction_factor) + ',' + Format("%.3f", r.z) +
           ',' + Format("%.1e", r.p) + ',' + Format("%.3f", r.slope) + ',' +
           std::string(ToString(r.trend)) + ',' +
           (row.hot ? "true" : "false") + '\n';
  }
  return out;
}

std::vector<TrendReportRow> ParseTrendCsv(std::string_view csv) {
  std::vector<std::string_view> lines = SplitLines(csv);
  if (lines.empty() || lines[0] != kTrendCsvHeader) {
    throw std::runtime_error("trend CSV lacks the expected header");
  }
  std::vector<TrendReportRow> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> f = SplitCsvLine(lines[i]);
    if (f.size() != 10) {
      throw std::runtime_error("trend CSV line " + std::to_string(i + 1) +
                               ": expected 10 fields");
    }
    TrendReportRow row;
    row.topic = f[0];
    row.result.n = std::stoul(f[1]);
    row.result.s = std::stoll(f[2]);
    row.result.var_s = std::stod(f[3]);
    row.result.correction_factor = std::stod(f[4]);
    row.result.z = std::stod(f[5]);
    row.result.p = std::stod(f[6]);
    row.result.slope = std::stod(f[7]);
    row.result.trend = ParseTrendClass(f[8]);
    row.hot = f[9] == "true";
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string WriteTrendJson(const TrendReport &report) {
  Json j;
  j["correction"] = ToString(report.correction);
  j["alpha"] = report.alpha;
  j["top_k"] = report.top_k;
  j["ranked"] = Json::array();
  for (const auto &row : report.ranked) {
    Json r = ResultJson(row.topic, row.result);
    r["hot"] = row.hot;
    j["ranked"].push_back(std::move(r));
  }
  j["tested"] = Json::array();
  for (const auto &[topic, result] : report.tested) {
    j["tested"].push_back(ResultJson(topic, result));
  }
  j["untestable"] = report.untestable;
  return j.dump(1) + "\n";
}

std::string RenderBurstCsv(const std::vector<BurstInterval> &bursts) {
  std::string out(kBurstCsvHeader);
  out += '\n';
  for (const auto &b : bursts) {
    out += CsvField(b.topic) + ',' + std::to_string(b.start_year) + ',' +
           std::to_string(b.end_year) + ',' + Format("%.4f", b.weight) + '\n';
  }
  return out;
}

std::string WriteBurstJson(const std::vector<BurstInterval> &bursts) {
  Json j = Json::array();
  for (const auto &b : bursts) {
    Json bj;
    bj["topic"] = b.topic;
    bj["start_year"] = b.start_year;
    bj["end_year"] = b.end_year;
    bj["weight"] = b.weight;
    j.push_back(std::move(bj));
  }
  return j.dump(1) + "\n";
}

std::vector<BurstInterval> ParseBurstJson(std::string_view raw) {
  std::vector<BurstInterval> out;
  try {
    for (const auto &bj : nlohmann::json::parse(raw)) {
      BurstInterval b;
      b.topic = bj.at("topic").get<std::string>();
      b.start_year = bj.at("start_year").get<int>();
      b.end_year = bj.at("end_year").get<int>();
      b.weight = bj.at("weight").get<double>();
      out.push_back(std::move(b));
    }
  } catch (const nlohmann::json::exception &e) {
    throw std::runtime_error(std::string("malformed burst file: ") + e.what());
  }
  return out;
}

std::string RenderTimelineSvg(const std::vector<BurstInterval> &bursts,
                              const TimelineLayout &layout,
                              TimelineOrder order) {
  if (layout.min_thickness > layout.max_thickness) {
    throw std::invalid_argument("min_thickness exceeds max_thickness");
  }
  int axis_min = layout.year_min;
  int axis_max = layout.year_max;
  bool have_axis = axis_min != 0 || axis_max != 0;
  double max_weight = 0.0;
  // topic -> (earliest start, total weight)
  std::map<std::string, std::pair<int, double>> topics;
  for (const auto &b : bursts) {
    if (!have_axis) {
      axis_min = b.start_year;
      axis_max = b.end_year;
      have_axis = true;
    }
    axis_min = std::min(axis_min, b.start_year);
    axis_max = std::max(axis_max, b.end_year);
    max_weight = std::max(max_weight, b.weight);
    auto [it, fresh] = topics.try_emplace(b.topic, b.start_year, 0.0);
    it->second.first = std::min(it->second.first, b.start_year);
    it->second.second += b.weight;
  }

  std::vector<std::string> rows;
  for (const auto &[topic, info] : topics) rows.push_back(topic);
  std::stable_sort(rows.begin(), rows.end(), [&](const auto &a, const auto &b) {
    const auto &ia = topics[a];
    const auto &ib = topics[b];
    if (order == TimelineOrder::kWeight && ia.second != ib.second) {
      return ia.second > ib.second;
    }
    if (ia.first != ib.first) return ia.first < ib.first;
    return a < b;
  });
  std::map<std::string, size_t> row_of;
  for (size_t i = 0; i < rows.size(); ++i) row_of[rows[i]] = i;

  const double plot_top = layout.margin_top;
  const double plot_bottom =
      plot_top + layout.row_height * static_cast<double>(rows.size());
  const double height =
      std::max(layout.height, plot_bottom + layout.margin_bottom);
  const double years = have_axis ? axis_max + 1 - axis_min : 1;
  auto x_of = [&](double year) {
    return layout.margin_left + (year - axis_min) / years * layout.plot_width();
  };

  std::string svg = SvgHeader(layout.width, height);
  svg += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<line x1=\"" + Px(layout.margin_left) + "\" y1=\"" + Px(plot_bottom) +
         "\" x2=\"" + Px(layout.margin_left + layout.plot_width()) +
         "\" y2=\"" + Px(plot_bottom) + "\" stroke=\"black\"/>\n";
  if (have_axis) {
    int step = years > 25 ? 5 : 1;
    for (int y = axis_min; y <= axis_max + 1; y += step) {
      double x = x_of(y);
      svg += "<line x1=\"" + Px(x) + "\" y1=\"" + Px(plot_bottom) + "\" x2=\"" +
             Px(x) + "\" y2=\"" + Px(plot_bottom + 4) +
             "\" stroke=\"black\"/>\n";
      if (y <= axis_max) {
        svg += "<text x=\"" + Px(x) + "\" y=\"" + Px(plot_bottom + 16) +
               "\" text-anchor=\"middle\">" + std::to_string(y) + "</text>\n";
      }
    }
  }
  for (size_t i = 0; i < rows.size(); ++i) {
    double cy = plot_top + layout.row_height * (static_cast<double>(i) + 0.5);
    svg += "<text x=\"" + Px(layout.margin_left - 6) + "\" y=\"" +
           Px(cy + 4) + "\" text-anchor=\"end\">" + XmlEscape(rows[i]) +
           "</text>\n";
  }
  for (const auto &b : bursts) {
    double frac = max_weight > 0 ? b.weight / max_weight : 0.0;
    double thick = layout.min_thickness +
                   (layout.max_thickness - layout.min_thickness) * frac;
    double cy = plot_top + layout.row_height *
                               (static_cast<double>(row_of[b.topic]) + 0.5);
    double x0 = x_of(b.start_year);
    double x1 = x_of(b.end_year + 1);
    svg += "<rect x=\"" + Px(x0) + "\" y=\"" + Px(cy - thick / 2) +
           "\" width=\"" + Px(x1 - x0) + "\" height=\"" + Px(thick) +
           "\" fill=\"#c0392b\"><title>" + XmlEscape(b.topic) + " " +
           std::to_string(b.start_year) + "-" + std::to_string(b.end_year) +
           " weight " + Format("%.3f", b.weight) + "</title></rect>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

std::string RenderSeriesSvg(const SeriesSet &series,
                            const std::vector<std::string> &topics,
                            bool cumulative) {
  const double width = 960;
  const double height = 480;
  const double left = 60;
  const double right = 220;
  const double top = 20;
  const double bottom = 40;
  const double pw = width - left - right;
  const double ph = height - top - bottom;

  std::vector<const TopicYearSeries *> chosen;
  for (const auto &t : series.topics) {
    if (topics.empty() ||
        std::find(topics.begin(), topics.end(), t.topic) != topics.end()) {
      chosen.push_back(&t);
    }
  }
  std::vector<std::vector<int64_t>> values;
  int64_t peak = 1;
  for (const auto *t : chosen) {
    values.push_back(cumulative ? Cumulative(t->counts) : t->counts);
    for (int64_t v : values.back()) peak = std::max(peak, v);
  }
  const size_t n = series.totals.size();
  auto x_of = [&](size_t i) {
    return left + (n > 1 ? pw * static_cast<double>(i) / (n - 1) : pw / 2);
  };
  auto y_of = [&](int64_t v) {
    return top + ph - ph * static_cast<double>(v) / static_cast<double>(peak);
  };

  static const char *kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                   "#bcbd22", "#17becf"};
  std::string svg = SvgHeader(width, height);
  svg += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<line x1=\"" + Px(left) + "\" y1=\"" + Px(top + ph) + "\" x2=\"" +
         Px(left + pw) + "\" y2=\"" + Px(top + ph) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + Px(left) + "\" y1=\"" + Px(top) + "\" x2=\"" +
         Px(left) + "\" y2=\"" + Px(top + ph) + "\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + Px(left - 6) + "\" y=\"" + Px(top + 4) +
         "\" text-anchor=\"end\">" + std::to_string(peak) + "</text>\n";
  for (size_t i = 0; i < n; ++i) {
    svg += "<text x=\"" + Px(x_of(i)) + "\" y=\"" + Px(top + ph + 16) +
           "\" text-anchor=\"middle\">" +
           std::to_string(series.totals.year_min + static_cast<int>(i)) +
           "</text>\n";
  }
  for (size_t k = 0; k < chosen.size(); ++k) {
    const char *color = kPalette[k % 10];
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" points=\"";
    for (size_t i = 0; i < n; ++i) {
      if (i) svg += ' ';
      svg += Px(x_of(i)) + "," + Px(y_of(values[k][i]));
    }
    svg += "\"/>\n";
    svg += "<text x=\"" + Px(left + pw + 8) + "\" y=\"" +
           Px(top + 14 * static_cast<double>(k + 1)) + "\" fill=\"" + color +
           "\">" + XmlEscape(chosen[k]->topic) + "</text>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

}  // namespace scitrend
