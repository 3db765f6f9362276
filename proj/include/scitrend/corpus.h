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

#ifndef SCITREND_CORPUS_H_
#define SCITREND_CORPUS_H_

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scitrend {

// One bibliographic record.
struct Document {
  std::string id;
  std::string title;
  std::string abstract;
  std::optional<int> year;
  std::string doc_type;
  std::string language;

  bool operator==(const Document &) const = default;
};

// Query refinements applied after export. Defaults select English articles
// and proceedings papers published 2004-2021.
struct CorpusFilter {
  int year_min = 2004;
  int year_max = 2021;
  std::set<std::string> allowed_doc_types = {"Article", "Proceedings Paper"};
  std::set<std::string> allowed_languages = {"English"};
};

class CorpusError : public std::runtime_error {
 public:
  enum class Kind {
    kMalformedHeader,
    kMalformedRow,
    kBadYear,
    kMalformedLine,
    kDuplicateId,
    kInvalidFilter,
  };

  CorpusError(Kind kind, size_t line, const std::string &what);

  Kind kind() const { return kind_; }
  // 1-based source line, 0 when not tied to a line.
  size_t line() const { return line_; }

 private:
  Kind kind_;
  size_t line_;
};

constexpr int kMinYear = 1900;
constexpr int kMaxYear = 2100;

// Parses a tab-delimited export whose first line holds two-letter field
// tags. UT, TI, AB, PY, DT and LA are mapped onto Document; other columns
// are ignored. UT and PY are mandatory header tags.
std::vector<Document> ParseWosExport(std::string_view raw);

// One JSON object per non-empty line.
std::vector<Document> ParseCanonicalJsonl(std::string_view raw);
std::string WriteCanonicalJsonl(const std::vector<Document> &docs);

std::vector<Document> FilterCorpus(const std::vector<Document> &docs,
                                   const CorpusFilter &filter);

// Title and abstract joined into the annotation unit.
std::string MergeText(const Document &doc);

}  // namespace scitrend

#endif  // SCITREND_CORPUS_H_
