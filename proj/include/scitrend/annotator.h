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

#ifndef SCITREND_ANNOTATOR_H_
#define SCITREND_ANNOTATOR_H_

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace scitrend {

// A mention in a document linked to a catalog entity. Offsets are byte
// offsets into the merged document text, half-open.
struct EntityAnnotation {
  std::string doc_id;
  std::string entity_id;
  std::string entity_title;
  std::string mention;
  size_t start = 0;
  size_t end = 0;
  double score = 0.0;

  bool operator==(const EntityAnnotation &) const = default;
};

// Settings for the remote entity-linking service. The epsilon and long_text
// values are forwarded as-is; rho_threshold is the client-side confidence
// cutoff.
struct AnnotatorConfig {
  std::string endpoint_url;
  std::string language = "en";
  double epsilon = 0.427;
  double rho_threshold = 0.16;
  int long_text = 10;
  std::string api_token;
  // Also send rho_threshold to the service as the "q" form field.
  bool forward_q = false;
  int max_retries = 3;
  std::chrono::milliseconds timeout{30000};
  std::chrono::milliseconds initial_backoff{500};
  int max_in_flight = 4;

  // Throws AnnotatorError(kInvalidConfig) on out-of-range values.
  void Validate() const;
};

class AnnotatorError : public std::runtime_error {
 public:
  enum class Kind {
    kAuth,
    kRateLimited,
    kTransport,
    kMalformedResponse,
    kInvalidConfig,
    kMalformedGazetteer,
    kMalformedLine,
  };

  AnnotatorError(Kind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Dictionary of surface forms for offline annotation. Keys are stored
// normalized (ASCII case-folded, whitespace collapsed).
class Gazetteer {
 public:
  struct Entry {
    std::string entity_title;
    double link_probability = 0.0;
  };

  // Adds or replaces a surface form. When the same normalized surface is
  // added twice, the entry with the higher link probability is kept.
  void Add(std::string_view surface, std::string_view entity_title,
           double link_probability);

  // Parses "surface\tentity_title\tlink_probability" lines. Blank lines and
  // lines starting with '#' are skipped.
  static Gazetteer FromTsv(std::string_view raw);

  const Entry *Find(const std::string &normalized_key) const;
  bool HasPrefix(const std::string &normalized_key) const;
  size_t size() const { return entries_.size(); }
  size_t max_tokens() const { return max_tokens_; }

 private:
  std::unordered_map<std::string, Entry> entries_;
  // Normalized token prefixes of every surface, used to stop extension
  // early during matching.
  std::unordered_set<std::string> prefixes_;
  size_t max_tokens_ = 0;
};

// Entity titles dropped after annotation, compared case-insensitively.
class Blacklist {
 public:
  Blacklist() = default;
  explicit Blacklist(const std::vector<std::string> &titles);

  // One title per line; blank lines and '#' comments are skipped.
  static Blacklist FromText(std::string_view raw);
  // Publisher and location names that leak in from copyright notices.
  static Blacklist Default();

  bool Contains(std::string_view title) const;
  size_t size() const { return titles_.size(); }

 private:
  std::unordered_set<std::string> titles_;
};

// Longest-match, left-to-right, non-overlapping dictionary matching on word
// boundaries. Entries below min_link_probability never match.
std::vector<EntityAnnotation> AnnotateGazetteer(std::string_view text,
                                                const Gazetteer &gazetteer,
                                                double min_link_probability,
                                                std::string_view doc_id = {});

std::vector<EntityAnnotation> ApplyBlacklist(
    const std::vector<EntityAnnotation> &annotations,
    const Blacklist &blacklist);

// Sorts by start and removes overlaps, keeping the higher score; ties go to
// the earlier then the longer span.
std::vector<EntityAnnotation> ResolveOverlaps(
    std::vector<EntityAnnotation> annotations);

std::vector<EntityAnnotation> ParseAnnotationsJsonl(std::string_view raw);
std::string WriteAnnotationsJsonl(
    const std::vector<EntityAnnotation> &annotations);

}  // namespace scitrend

#endif  // SCITREND_ANNOTATOR_H_
