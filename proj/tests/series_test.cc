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
#include <random>
#include <set>

#include "doctest.h"

using namespace scitrend;

namespace {

Document Doc(std::string id, std::optional<int> year) {
  return Document{std::move(id), "t", "", year, "Article", "English"};
}

EntityAnnotation Anno(std::string doc, std::string topic, size_t start = 0) {
  EntityAnnotation a;
  a.doc_id = std::move(doc);
  a.entity_title = std::move(topic);
  a.entity_id = a.entity_title;
  a.start = start;
  a.end = start + 1;
  return a;
}

}  // namespace

TEST_CASE("toy corpus aggregates to document and mention frequency") {
  std::vector<Document> docs = {Doc("d1", 2004), Doc("d2", 2004),
                                Doc("d3", 2006)};
  std::vector<EntityAnnotation> annos = {Anno("d1", "X", 0), Anno("d1", "X", 5),
                                         Anno("d3", "X", 0)};
  SeriesSet s = BuildSeries(docs, annos, 1);
  CHECK(s.totals.year_min == 2004);
  CHECK(s.totals.year_max == 2006);
  CHECK(s.totals.totals == std::vector<int64_t>{2, 0, 1});
  REQUIRE(s.topics.size() == 1);
  CHECK(s.topics[0].topic == "X");
  CHECK(s.topics[0].counts == std::vector<int64_t>{1, 0, 1});
  CHECK(s.topics[0].occurrences == std::vector<int64_t>{2, 0, 1});

  CHECK(BuildSeries(docs, annos, 3).topics.empty());
  CHECK(BuildSeries(docs, annos, 2).topics.size() == 1);
}

TEST_CASE("no annotations still yields totals") {
  SeriesSet s = BuildSeries({Doc("a", 2010), Doc("b", 2012)}, {}, 0);
  CHECK(s.totals.totals == std::vector<int64_t>{1, 0, 1});
  CHECK(s.topics.empty());
}

TEST_CASE("error paths") {
  try {
    BuildSeries({Doc("a", 2010)}, {Anno("zzz", "X")}, 0);
    FAIL("expected DanglingAnnotation");
  } catch (const SeriesError &e) {
    CHECK(e.kind() == SeriesError::Kind::kDanglingAnnotation);
  }
  CHECK_THROWS_AS(BuildSeries({Doc("a", std::nullopt)}, {}, 0), SeriesError);
  CHECK_THROWS_AS(BuildSeries({}, {}, 0), SeriesError);
}

TEST_CASE("random corpora: invariants, permutation invariance, file round trip") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Document> docs;
    int n = 1 + rng() % 40;
    for (int i = 0; i < n; ++i) {
      docs.push_back(Doc("d" + std::to_string(i), 2000 + rng() % 12));
    }
    std::vector<EntityAnnotation> annos;
    std::set<std::pair<std::string, std::string>> pairs;
    for (int k = rng() % 120; k > 0; --k) {
      std::string doc = "d" + std::to_string(rng() % n);
      std::string topic = "T" + std::to_string(rng() % 6);
      annos.push_back(Anno(doc, topic, rng() % 50));
      pairs.emplace(doc, topic);
    }
    SeriesSet s = BuildSeries(docs, annos, 0);

    int lo = 3000, hi = 0;
    for (const auto &d : docs) {
      lo = std::min(lo, *d.year);
      hi = std::max(hi, *d.year);
    }
    CHECK(s.totals.size() == static_cast<size_t>(hi - lo + 1));
    CHECK(std::is_sorted(s.topics.begin(), s.topics.end(),
                         [](auto &a, auto &b) { return a.topic < b.topic; }));
    size_t pair_total = 0;
    for (const auto &t : s.topics) {
      REQUIRE(t.counts.size() == s.totals.size());
      for (size_t y = 0; y < t.counts.size(); ++y) {
        CHECK(t.counts[y] <= s.totals.totals[y]);
        CHECK(t.counts[y] <= t.occurrences[y]);
        pair_total += t.counts[y];
      }
    }
    CHECK(pair_total == pairs.size());

    auto shuffled = docs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto shuffled_annos = annos;
    std::shuffle(shuffled_annos.begin(), shuffled_annos.end(), rng);
    CHECK(BuildSeries(shuffled, shuffled_annos, 0) == s);
    CHECK(ParseSeriesJson(WriteSeriesJson(s)) == s);
  }
}

TEST_CASE("series file validation") {
  CHECK_THROWS_AS(ParseSeriesJson("{}"), SeriesError);
  CHECK_THROWS_AS(
      ParseSeriesJson(
          R"({"year_min":2000,"year_max":2001,"totals":[1],"topics":[]})"),
      SeriesError);
  CHECK_THROWS_AS(
      ParseSeriesJson(R"({"year_min":2000,"year_max":2000,"totals":[1],)"
                      R"("topics":[{"topic":"X","counts":[1,2],"occurrences":[1]}]})"),
      SeriesError);
}

TEST_CASE("cumulative counts") {
  CHECK(Cumulative({1, 0, 2, 3}) == std::vector<int64_t>{1, 1, 3, 6});
  CHECK(Cumulative({}).empty());
}
