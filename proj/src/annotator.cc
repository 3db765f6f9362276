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

#include "scitrend/annotator.h"

#include <algorithm>
#include <tuple>

#include "json.hpp"
#include "scitrend/text.h"

namespace scitrend {

namespace {

struct Token {
  size_t start;
  size_t end;
};

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < text.size()) {
    if (!IsWordByte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    size_t b = i;
    while (i < text.size() && IsWordByte(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    tokens.push_back({b, i});
  }
  return tokens;
}

bool ParseProbability(std::string_view s, double *out) {
  s = Trim(s);
  try {
    size_t used = 0;
    double v = std::stod(std::string(s), &used);
    if (used != s.size() || !(v >= 0.0 && v <= 1.0)) return false;
    *out = v;
    return true;
  } catch (const std::exception &) {
    return false;
  }
}

}  // namespace

void AnnotatorConfig::Validate() const {
  auto fail = [](const std::string &msg) {
    throw AnnotatorError(AnnotatorError::Kind::kInvalidConfig, msg);
  };
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) fail("epsilon must be in [0,1]");
  if (!(rho_threshold >= 0.0 && rho_threshold <= 1.0)) {
    fail("rho_threshold must be in [0,1]");
  }
  if (long_text < 0) fail("long_text must be nonnegative");
  if (max_retries < 0) fail("max_retries must be nonnegative");
  if (max_in_flight < 1) fail("max_in_flight must be at least 1");
}

void Gazetteer::Add(std::string_view surface, std::string_view entity_title,
                    double link_probability) {
  std::string key = NormalizeKey(surface);
  if (key.empty()) {
    throw AnnotatorError(AnnotatorError::Kind::kMalformedGazetteer,
                         "empty surface form");
  }
  auto it = entries_.find(key);
  if (it != entries_.end() && it->second.link_probability >= link_probability) {
    return;
  }
  entries_[key] = Entry{std::string(entity_title), link_probability};

  std::vector<Token> tokens = Tokenize(key);
  for (const Token &t : tokens) prefixes_.insert(key.substr(0, t.end));
  prefixes_.insert(key);
  max_tokens_ = std::max(max_tokens_, tokens.size());
}

Gazetteer Gazetteer::FromTsv(std::string_view raw) {
  if (raw.substr(0, 3) == "\xEF\xBB\xBF") raw.remove_prefix(3);
  Gazetteer g;
  std::vector<std::string_view> lines = SplitLines(raw);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (Trim(line).empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields = SplitChar(line, '\t');
    double p = 0.0;
    if (fields.size() != 3 || Trim(fields[1]).empty() ||
        !ParseProbability(fields[2], &p)) {
      throw AnnotatorError(AnnotatorError::Kind::kMalformedGazetteer,
                           "gazetteer line " + std::to_string(i + 1) +
                               ": expected surface, title, probability");
    }
    g.Add(fields[0], Trim(fields[1]), p);
  }
  return g;
}

const Gazetteer::Entry *Gazetteer::Find(const std::string &key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

bool Gazetteer::HasPrefix(const std::string &key) const {
  return prefixes_.count(key) > 0;
}

Blacklist::Blacklist(const std::vector<std::string> &titles) {
  for (const auto &t : titles) titles_.insert(NormalizeKey(t));
}

Blacklist Blacklist::FromText(std::string_view raw) {
  std::vector<std::string> titles;
  for (std::string_view line : SplitLines(raw)) {
    std::string_view t = Trim(line);
    if (t.empty() || t.front() == '#') continue;
    titles.emplace_back(t);
  }
  return Blacklist(titles);
}

Blacklist Blacklist::Default() {
  return Blacklist({"Emerald", "Elsevier", "Hungary", "Budapest"});
}

bool Blacklist::Contains(std::string_view title) const {
  return titles_.count(NormalizeKey(title)) > 0;
}

std::vector<EntityAnnotation> AnnotateGazetteer(std::string_view text,
                                                const Gazetteer &gazetteer,
                                                double min_link_probability,
                                                std::string_view doc_id) {
  std::vector<EntityAnnotation> out;
  std::vector<Token> tokens = Tokenize(text);
  size_t i = 0;
  while (i < tokens.size()) {
    const Gazetteer::Entry *best = nullptr;
    size_t best_j = 0;
    size_t limit = std::min(tokens.size(), i + gazetteer.max_tokens());
    for (size_t j = i; j < limit; ++j) {
      std::string key = NormalizeKey(
          text.substr(tokens[i].start, tokens[j].end - tokens[i].start));
      if (!gazetteer.HasPrefix(key)) break;
      const Gazetteer::Entry *entry = gazetteer.Find(key);
      if (entry && entry->link_probability >= min_link_probability) {
        best = entry;
        best_j = j;
      }
    }
    if (!best) {
      ++i;
      continue;
    }
    EntityAnnotation a;
    a.doc_id = std::string(doc_id);
    a.entity_id = best->entity_title;
    a.entity_title = best->entity_title;
    a.start = tokens[i].start;
    a.end = tokens[best_j].end;
    a.mention = std::string(text.substr(a.start, a.end - a.start));
    a.score = best->link_probability;
    out.push_back(std::move(a));
    i = best_j + 1;
  }
  return out;
}

std::vector<EntityAnnotation> ApplyBlacklist(
    const std::vector<EntityAnnotation> &annotations,
    const Blacklist &blacklist) {
  std::vector<EntityAnnotation> kept;
  kept.reserve(annotations.size());
  for (const auto &a : annotations) {
    if (!blacklist.Contains(a.entity_title)) kept.push_back(a);
  }
  return kept;
}

std::vector<EntityAnnotation> ResolveOverlaps(
    std::vector<EntityAnnotation> annotations) {
  std::vector<size_t> order(annotations.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t l, size_t r) {
    const auto &a = annotations[l];
    const auto &b = annotations[r];
    if (a.score != b.score) return a.score > b.score;
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end > b.end;
    return std::tie(a.entity_title, a.entity_id) <
           std::tie(b.entity_title, b.entity_id);
  });

  std::vector<EntityAnnotation> kept;
  for (size_t idx : order) {
    const auto &cand = annotations[idx];
    bool clash = std::any_of(kept.begin(), kept.end(), [&](const auto &k) {
      return cand.start < k.end && k.start < cand.end;
    });
    if (!clash) kept.push_back(cand);
  }
  std::sort(kept.begin(), kept.end(),
            [](const auto &a, const auto &b) { return a.start < b.start; });
  return kept;
}

std::vector<EntityAnnotation> ParseAnnotationsJsonl(std::string_view raw) {
  std::vector<EntityAnnotation> out;
  std::vector<std::string_view> lines = SplitLines(raw);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    try {
      auto j = nlohmann::json::parse(lines[i]);
      EntityAnnotation a;
      a.doc_id = j.at("doc_id").get<std::string>();
      a.entity_id = j.at("entity_id").get<std::string>();
      a.entity_title = j.at("entity_title").get<std::string>();
      a.mention = j.at("mention").get<std::string>();
      a.start = j.at("start").get<size_t>();
      a.end = j.at("end").get<size_t>();
      a.score = j.at("score").get<double>();
      if (a.start >= a.end) throw std::runtime_error("empty span");
      out.push_back(std::move(a));
    } catch (const std::exception &e) {
      throw AnnotatorError(AnnotatorError::Kind::kMalformedLine,
                           "annotations line " + std::to_string(i + 1) +
                               ": " + e.what());
    }
  }
  return out;
}

std::string WriteAnnotationsJsonl(
    const std::vector<EntityAnnotation> &annotations) {
  std::string out;
  for (const auto &a : annotations) {
    nlohmann::ordered_json j;
    j["doc_id"] = a.doc_id;
    j["entity_id"] = a.entity_id;
    j["entity_title"] = a.entity_title;
    j["mention"] = a.mention;
    j["start"] = a.start;
    j["end"] = a.end;
    j["score"] = a.score;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace scitrend
