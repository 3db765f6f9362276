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

#ifndef SCITREND_SERIES_H_
#define SCITREND_SERIES_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scitrend/annotator.h"
#include "scitrend/corpus.h"

namespace scitrend {

// Documents per year on a contiguous axis [year_min, year_max].
struct CorpusYearTotals {
  int year_min = 0;
  int year_max = -1;
  std::vector<int64_t> totals;

  size_t size() const { return totals.size(); }
  bool operator==(const CorpusYearTotals &) const = default;
};

// Per-topic counts sharing the CorpusYearTotals axis. counts holds document
// frequency (a document counts once per topic); occurrences holds raw
// mention counts.
struct TopicYearSeries {
  std::string topic;
  std::vector<int64_t> counts;
  std::vector<int64_t> occurrences;

  bool operator==(const TopicYearSeries &) const = default;
};

struct SeriesSet {
  CorpusYearTotals totals;
  std::vector<TopicYearSeries> topics;

  bool operator==(const SeriesSet &) const = default;
};

class SeriesError : public std::runtime_error {
 public:
  enum class Kind { kDanglingAnnotation, kEmptyCorpus, kMalformedFile };

  SeriesError(Kind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

constexpr int64_t kDefaultMinDocs = 20;

// Topics are keyed by entity title and returned in lexicographic order;
// topics mentioned by fewer than min_docs documents overall are dropped.
SeriesSet BuildSeries(const std::vector<Document> &docs,
                      const std::vector<EntityAnnotation> &annotations,
                      int64_t min_docs = kDefaultMinDocs);

std::vector<int64_t> Cumulative(const std::vector<int64_t> &values);

std::string WriteSeriesJson(const SeriesSet &series);
SeriesSet ParseSeriesJson(std::string_view raw);

}  // namespace scitrend

#endif  // SCITREND_SERIES_H_
