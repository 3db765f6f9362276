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

#include <charconv>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "scitrend/text.h"

namespace scitrend {

namespace {

using Json = nlohmann::ordered_json;

std::string LineMessage(size_t line, const std::string &msg) {
  return "line " + std::to_string(line) + ": " + msg;
}

std::optional<int> ParseYear(std::string_view field, size_t line) {
  std::string_view s = Trim(field);
  if (s.empty()) return std::nullopt;
  int year = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), year);
  if (ec != std::errc() || end != s.data() + s.size() || s.size() != 4 ||
      year < kMinYear || year > kMaxYear) {
    throw CorpusError(CorpusError::Kind::kBadYear, line,
                      LineMessage(line, "bad publication year '" +
                                            std::string(s) + "'"));
  }
  return year;
}

bool ContainsFolded(const std::set<std::string> &allowed,
                    std::string_view value) {
  std::string v = AsciiLower(Trim(value));
  for (const auto &a : allowed) {
    if (AsciiLower(Trim(a)) == v) return true;
  }
  return false;
}

Json ToJson(const Document &doc) {
  Json j;
  j["id"] = doc.id;
  j["title"] = doc.title;
  j["abstract"] = doc.abstract;
  j["year"] = doc.year ? Json(*doc.year) : Json(nullptr);
  j["doc_type"] = doc.doc_type;
  j["language"] = doc.language;
  return j;
}

}  // namespace

CorpusError::CorpusError(Kind kind, size_t line, const std::string &what)
    : std::runtime_error(what), kind_(kind), line_(line) {}

std::vector<Document> ParseWosExport(std::string_view raw) {
  if (raw.substr(0, 3) == "\xEF\xBB\xBF") raw.remove_prefix(3);
  std::vector<std::string_view> lines = SplitLines(raw);
  if (lines.empty()) {
    throw CorpusError(CorpusError::Kind::kMalformedHeader, 1,
                      "missing header line");
  }

  std::vector<std::string_view> header = SplitChar(lines[0], '\t');
  std::unordered_map<std::string, size_t> column;
  for (size_t i = 0; i < header.size(); ++i) {
    std::string tag(Trim(header[i]));
    if (!tag.empty() && !column.count(tag)) column[tag] = i;
  }
  for (const char *required : {"UT", "PY"}) {
    if (!column.count(required)) {
      throw CorpusError(CorpusError::Kind::kMalformedHeader, 1,
                        std::string("header lacks the ") + required + " tag");
    }
  }
  auto field = [&](const std::vector<std::string_view> &row,
                   const char *tag) -> std::string {
    auto it = column.find(tag);
    return it == column.end() ? std::string() : std::string(row[it->second]);
  };

  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  for (size_t i = 1; i < lines.size(); ++i) {
    size_t line = i + 1;
    if (Trim(lines[i]).empty()) continue;
    std::vector<std::string_view> row = SplitChar(lines[i], '\t');
    if (row.size() != header.size()) {
      throw CorpusError(
          CorpusError::Kind::kMalformedRow, line,
          LineMessage(line, "expected " + std::to_string(header.size()) +
                                " fields, found " +
                                std::to_string(row.size())));
    }
    Document doc;
    doc.id = std::string(Trim(field(row, "UT")));
    if (doc.id.empty()) {
      throw CorpusError(CorpusError::Kind::kMalformedRow, line,
                        LineMessage(line, "empty UT field"));
    }
    doc.title = field(row, "TI");
    doc.abstract = field(row, "AB");
    doc.year = ParseYear(row[column["PY"]], line);
    doc.doc_type = field(row, "DT");
    doc.language = field(row, "LA");
    if (!seen.insert(doc.id).second) {
      throw CorpusError(CorpusError::Kind::kDuplicateId, line,
                        LineMessage(line, "duplicate id " + doc.id));
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<Document> ParseCanonicalJsonl(std::string_view raw) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  std::vector<std::string_view> lines = SplitLines(raw);
  for (size_t i = 0; i < lines.size(); ++i) {
    size_t line = i + 1;
    if (Trim(lines[i]).empty()) continue;
    Document doc;
    try {
      Json j = Json::parse(lines[i]);
      if (!j.is_object()) throw std::runtime_error("not a JSON object");
      doc.id = j.at("id").get<std::string>();
      doc.title = j.at("title").get<std::string>();
      doc.abstract = j.at("abstract").get<std::string>();
      const Json &year = j.at("year");
      if (!year.is_null()) {
        int y = year.get<int>();
        if (y < kMinYear || y > kMaxYear) {
          throw std::runtime_error("year out of range");
        }
        doc.year = y;
      }
      doc.doc_type = j.at("doc_type").get<std::string>();
      doc.language = j.at("language").get<std::string>();
    } catch (const std::exception &e) {
      throw CorpusError(CorpusError::Kind::kMalformedLine, line,
                        LineMessage(line, e.what()));
    }
    if (doc.id.empty()) {
      throw CorpusError(CorpusError::Kind::kMalformedLine, line,
                        LineMessage(line, "empty id"));
    }
    if (!seen.insert(doc.id).second) {
      throw CorpusError(CorpusError::Kind::kDuplicateId, line,
                        LineMessage(line, "duplicate id " + doc.id));
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::string WriteCanonicalJsonl(const std::vector<Document> &docs) {
  std::string out;
  for (const auto &doc : docs) {
    out += ToJson(doc).dump();
    out += '\n';
  }
  return out;
}

std::vector<Document> FilterCorpus(const std::vector<Document> &docs,
                                   const CorpusFilter &filter) {
  std::vector<Document> kept;
  for (const auto &doc : docs) {
    if (!doc.year) continue;
    if (*doc.year < filter.year_min || *doc.year > filter.year_max) continue;
    if (!ContainsFolded(filter.allowed_doc_types, doc.doc_type)) continue;
    if (!ContainsFolded(filter.allowed_languages, doc.language)) continue;
    kept.push_back(doc);
  }
  return kept;
}

std::string MergeText(const Document &doc) {
  if (doc.abstract.empty()) return doc.title;
  if (!doc.title.empty() && doc.title.back() == '.') {
    return doc.title + " " + doc.abstract;
  }
  return doc.title + ". " + doc.abstract;
}

}  // namespace scitrend
