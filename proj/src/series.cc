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

#include "scitrend/series.h"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "json.hpp"

namespace scitrend {

SeriesSet BuildSeries(const std::vector<Document> &docs,
                      const std::vector<EntityAnnotation> &annotations,
                      int64_t min_docs) {
  SeriesSet out;
  std::unordered_map<std::string_view, int> year_of;
  bool any = false;
  for (const auto &doc : docs) {
    if (!doc.year) continue;
    year_of.emplace(doc.id, *doc.year);
    if (!any) {
      out.totals.year_min = out.totals.year_max = *doc.year;
      any = true;
    }
    out.totals.year_min = std::min(out.totals.year_min, *doc.year);
    out.totals.year_max = std::max(out.totals.year_max, *doc.year);
  }
  if (!any) {
    throw SeriesError(SeriesError::Kind::kEmptyCorpus,
                      "no dated documents to build a year axis from");
  }
  const size_t span = out.totals.year_max - out.totals.year_min + 1;
  out.totals.totals.assign(span, 0);
  for (const auto &[id, year] : year_of) {
    ++out.totals.totals[year - out.totals.year_min];
  }

  // topic -> per-year occurrences, plus the distinct documents per topic.
  std::map<std::string, std::vector<int64_t>> occurrences;
  std::map<std::string, std::set<std::string_view>> docs_of;
  for (const auto &a : annotations) {
    auto it = year_of.find(a.doc_id);
    if (it == year_of.end()) {
      throw SeriesError(SeriesError::Kind::kDanglingAnnotation,
                        "annotation refers to unknown or undated document '" +
                            a.doc_id + "'");
    }
    auto &occ = occurrences[a.entity_title];
    if (occ.empty()) occ.assign(span, 0);
    ++occ[it->second - out.totals.year_min];
    docs_of[a.entity_title].insert(it->first);
  }

  for (auto &[topic, occ] : occurrences) {
    const auto &ids = docs_of[topic];
    if (static_cast<int64_t>(ids.size()) < min_docs) continue;
    TopicYearSeries s;
    s.topic = topic;
    s.counts.assign(span, 0);
    for (std::string_view id : ids) {
      ++s.counts[year_of.at(id) - out.totals.year_min];
    }
    s.occurrences = std::move(occ);
    out.topics.push_back(std::move(s));
  }
  return out;
}

std::vector<int64_t> Cumulative(const std::vector<int64_t> &values) {
  std::vector<int64_t> out(values.size());
  int64_t run = 0;
  for (size_t i = 0; i < values.size(); ++i) out[i] = run += values[i];
  return out;
}

std::string WriteSeriesJson(const SeriesSet &series) {
  nlohmann::ordered_json j;
  j["year_min"] = series.totals.year_min;
  j["year_max"] = series.totals.year_max;
  j["totals"] = series.totals.totals;
  j["topics"] = nlohmann::ordered_json::array();
  for (const auto &t : series.topics) {
    nlohmann::ordered_json tj;
    tj["topic"] = t.topic;
    tj["counts"] = t.counts;
    tj["occurrences"] = t.occurrences;
    j["topics"].push_back(std::move(tj));
  }
  return j.dump(1) + "\n";
}

SeriesSet ParseSeriesJson(std::string_view raw) {
  SeriesSet s;
  try {
    auto j = nlohmann::json::parse(raw);
    s.totals.year_min = j.at("year_min").get<int>();
    s.totals.year_max = j.at("year_max").get<int>();
    s.totals.totals = j.at("totals").get<std::vector<int64_t>>();
    for (const auto &tj : j.at("topics")) {
      TopicYearSeries t;
      t.topic = tj.at("topic").get<std::string>();
      t.counts = tj.at("counts").get<std::vector<int64_t>>();
      t.occurrences = tj.at("occurrences").get<std::vector<int64_t>>();
      s.topics.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception &e) {
    throw SeriesError(SeriesError::Kind::kMalformedFile, e.what());
  }
  const auto span =
      static_cast<size_t>(s.totals.year_max - s.totals.year_min + 1);
  if (s.totals.year_max < s.totals.year_min || s.totals.totals.size() != span) {
    throw SeriesError(SeriesError::Kind::kMalformedFile,
                      "totals do not match the year axis");
  }
  for (const auto &t : s.topics) {
    if (t.counts.size() != span || t.occurrences.size() != span) {
      throw SeriesError(SeriesError::Kind::kMalformedFile,
                        "series for '" + t.topic + "' has wrong length");
    }
  }
  return s;
}

}  // namespace scitrend
