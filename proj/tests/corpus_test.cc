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

#include "scitrend/corpus.h"

#include <random>

#include "doctest.h"

using namespace scitrend;

namespace {

const char *kHeader = "UT\tTI\tAB\tPY\tDT\tLA\n";

CorpusError::Kind KindOf(const std::string &raw, size_t *line = nullptr) {
  try {
    ParseWosExport(raw);
  } catch (const CorpusError &e) {
    if (line) *line = e.line();
    return e.kind();
  }
  FAIL("expected a CorpusError");
  return CorpusError::Kind::kMalformedRow;
}

Document Doc(std::string id, std::optional<int> year,
             std::string type = "Article", std::string lang = "English") {
  return Document{std::move(id), "t", "", year, std::move(type),
                  std::move(lang)};
}

}  // namespace

TEST_CASE("WoS export: empty body yields no documents") {
  CHECK(ParseWosExport(kHeader).empty());
}

TEST_CASE("WoS export: minimal record") {
  auto docs = ParseWosExport(std::string(kHeader) +
                             "W1\tA title\tAn abstract\t2004\tArticle\tEnglish\n");
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].id == "W1");
  CHECK(docs[0].title == "A title");
  CHECK(docs[0].abstract == "An abstract");
  CHECK(docs[0].year == 2004);
  CHECK(docs[0].doc_type == "Article");
  CHECK(docs[0].language == "English");
}

TEST_CASE("WoS export: columns follow the header, unknown tags ignored") {
  auto docs = ParseWosExport(
      "PY\tAU\tUT\tLA\tDT\tTI\r\n2010\tSmith, J\tW9\tEnglish\tArticle\tT\r\n");
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].id == "W9");
  CHECK(docs[0].year == 2010);
  CHECK(docs[0].title == "T");
  CHECK(docs[0].abstract.empty());
}

TEST_CASE("WoS export: byte-order mark and missing year") {
  auto docs = ParseWosExport("\xEF\xBB\xBFUT\tPY\nW1\t\n");
  REQUIRE(docs.size() == 1);
  CHECK_FALSE(docs[0].year.has_value());
}

TEST_CASE("WoS export: error paths") {
  size_t line = 0;
  CHECK(KindOf(std::string(kHeader) + "W1\tT\tA\t20O4\tArticle\tEnglish\n",
               &line) == CorpusError::Kind::kBadYear);
  CHECK(line == 2);
  CHECK(KindOf(std::string(kHeader) + "W1\tT\tA\t1850\tArticle\tEnglish\n") ==
        CorpusError::Kind::kBadYear);
  CHECK(KindOf("TI\tPY\nT\t2004\n") == CorpusError::Kind::kMalformedHeader);
  CHECK(KindOf("UT\tTI\nW1\tT\n") == CorpusError::Kind::kMalformedHeader);
  CHECK(KindOf("") == CorpusError::Kind::kMalformedHeader);
  CHECK(KindOf(std::string(kHeader) +
                   "W1\tT\tA\t2004\tArticle\tEnglish\nW2\tT\t2004\n",
               &line) == CorpusError::Kind::kMalformedRow);
  CHECK(line == 3);
  CHECK(KindOf(std::string(kHeader) + "W1\tT\tA\t2004\tArticle\tEnglish\n" +
               "W1\tT\tA\t2005\tArticle\tEnglish\n") ==
        CorpusError::Kind::kDuplicateId);
}

TEST_CASE("canonical JSONL: parse, duplicates, blank lines") {
  auto docs = ParseCanonicalJsonl(
      R"({"id":"W1","title":"T","abstract":"","year":2010,"doc_type":"Article","language":"English"})");
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].year == 2010);

  const std::string a =
      R"({"id":"A","title":"T","abstract":"x","year":2010,"doc_type":"Article","language":"English"})";
  const std::string b =
      R"({"id":"B","title":"U","abstract":"y","year":null,"doc_type":"Article","language":"English"})";
  auto two = ParseCanonicalJsonl(a + "\n\n   \n" + b + "\n");
  REQUIRE(two.size() == 2);
  CHECK(two[0].id == "A");
  CHECK(two[1].id == "B");
  CHECK_FALSE(two[1].year.has_value());

  try {
    ParseCanonicalJsonl(a + "\n" + a + "\n");
    FAIL("expected DuplicateId");
  } catch (const CorpusError &e) {
    CHECK(e.kind() == CorpusError::Kind::kDuplicateId);
    CHECK(e.line() == 2);
  }
  try {
    ParseCanonicalJsonl(a + "\n{\"id\":\"C\"}\n");
    FAIL("expected MalformedLine");
  } catch (const CorpusError &e) {
    CHECK(e.kind() == CorpusError::Kind::kMalformedLine);
    CHECK(e.line() == 2);
  }
}

TEST_CASE("canonical JSONL round trip over random documents") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> len(0, 12);
  std::uniform_int_distribution<int> byte(1, 255);
  std::uniform_int_distribution<int> year(kMinYear, kMaxYear);
  auto text = [&] {
    std::string s;
    for (int i = len(rng); i > 0; --i) {
      // Printable ASCII plus tabs, quotes and backslashes; non-ASCII bytes
      // are kept to valid two-byte UTF-8 sequences.
      int c = byte(rng);
      if (c >= 0x80) {
        s += static_cast<char>(0xC3);
        s += static_cast<char>(0x80 + (c & 0x3F));
      } else {
        s += static_cast<char>(c);
      }
    }
    return s;
  };
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Document> docs;
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
      Document d;
      d.id = "ID" + std::to_string(i) + text();
      d.title = text();
      d.abstract = text();
      if (rng() % 5) d.year = year(rng);
      d.doc_type = text();
      d.language = text();
      docs.push_back(d);
    }
    CHECK(ParseCanonicalJsonl(WriteCanonicalJsonl(docs)) == docs);
  }
}

TEST_CASE("filter: default refinements") {
  CorpusFilter f;
  CHECK(FilterCorpus({Doc("a", 2003)}, f).empty());
  CHECK(FilterCorpus({Doc("a", 2004)}, f).size() == 1);
  CHECK(FilterCorpus({Doc("a", 2021)}, f).size() == 1);
  CHECK(FilterCorpus({Doc("a", 2022)}, f).empty());
  CHECK(FilterCorpus({Doc("a", std::nullopt)}, f).empty());
  CHECK(FilterCorpus({Doc("a", 2010, "Review")}, f).empty());
  CHECK(FilterCorpus({Doc("a", 2010, "Article", "German")}, f).empty());
  // Case-insensitive after trimming.
  CHECK(FilterCorpus({Doc("a", 2010, " proceedings paper ", "ENGLISH")}, f)
            .size() == 1);
}

TEST_CASE("filter: empty allowed set rejects everything") {
  CorpusFilter f;
  f.allowed_doc_types.clear();
  CHECK(FilterCorpus({Doc("a", 2010), Doc("b", 2011)}, f).empty());
}

TEST_CASE("filter: idempotent, order preserving subset") {
  std::mt19937 rng(11);
  const char *types[] = {"Article", "Review", "Proceedings Paper", "article"};
  const char *langs[] = {"English", "German", "english"};
  CorpusFilter f;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Document> docs;
    for (int i = 0; i < 30; ++i) {
      std::optional<int> y;
      if (rng() % 6) y = 2000 + static_cast<int>(rng() % 25);
      docs.push_back(Doc(std::to_string(i), y, types[rng() % 4],
                         langs[rng() % 3]));
    }
    auto once = FilterCorpus(docs, f);
    CHECK(FilterCorpus(once, f) == once);
    CHECK(once.size() <= docs.size());
    size_t pos = 0;
    for (const auto &d : once) {
      while (pos < docs.size() && !(docs[pos] == d)) ++pos;
      CHECK(pos < docs.size());
      ++pos;
    }
  }
}

TEST_CASE("merge text") {
  Document d;
  d.title = "A";
  d.abstract = "B";
  CHECK(MergeText(d) == "A. B");
  d.abstract = "";
  CHECK(MergeText(d) == "A");
  d.title = "A.";
  d.abstract = "B";
  CHECK(MergeText(d) == "A. B");
}
