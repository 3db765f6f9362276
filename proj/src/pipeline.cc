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

#include "scitrend/pipeline.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "parallel.h"

namespace scitrend {

namespace fs = std::filesystem;

namespace {

using Json = nlohmann::ordered_json;

template <typename Fn>
auto Stage(const char *name, Fn &&fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PipelineError &) {
    throw;
  } catch (const std::exception &e) {
    throw PipelineError(name, e.what());
  }
}

fs::path Resolve(const fs::path &base, const std::string &p) {
  if (p.empty()) return {};
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::set<std::string> StringSet(const Json &j) {
  std::set<std::string> out;
  for (const auto &v : j) out.insert(v.get<std::string>());
  return out;
}

}  // namespace

void PipelineConfig::Validate() const {
  auto fail = [](const std::string &msg) { throw PipelineError("config", msg); };
  if (corpus_path.empty()) fail("no corpus path");
  if (filter.year_min > filter.year_max) fail("filter year_min > year_max");
  if (mode == AnnotationMode::kGazetteer && gazetteer_path.empty()) {
    fail("gazetteer mode needs a gazetteer path");
  }
  if (mode == AnnotationMode::kRemote && remote.endpoint_url.empty()) {
    fail("remote mode needs an endpoint_url");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must be in (0, 1)");
  if (top_k < 1) fail("top_k must be at least 1");
  if (min_docs < 0) fail("min_docs must be nonnegative");
  if (layout.min_thickness > layout.max_thickness) {
    fail("min_thickness exceeds max_thickness");
  }
  try {
    burst.Validate();
    if (mode == AnnotationMode::kRemote) remote.Validate();
  } catch (const std::exception &e) {
    fail(e.what());
  }
}

PipelineConfig PipelineConfigFromJson(std::string_view json,
                                      const fs::path &base_dir) {
  PipelineConfig c;
  try {
    auto j = Json::parse(json);
    c.corpus_path = Resolve(base_dir, j.at("corpus").get<std::string>());
    c.corpus_format = j.value("corpus_format", c.corpus_format);
    if (j.contains("out")) {
      c.out_dir = Resolve(base_dir, j["out"].get<std::string>());
    }
    if (j.contains("filter")) {
      const auto &f = j["filter"];
      c.filter.year_min = f.value("year_min", c.filter.year_min);
      c.filter.year_max = f.value("year_max", c.filter.year_max);
      if (f.contains("doc_types")) {
        c.filter.allowed_doc_types = StringSet(f["doc_types"]);
      }
      if (f.contains("languages")) {
        c.filter.allowed_languages = StringSet(f["languages"]);
      }
    }
    if (j.contains("annotation")) {
      const auto &a = j["annotation"];
      std::string mode = a.value("mode", std::string("gazetteer"));
      if (mode == "gazetteer") {
        c.mode = AnnotationMode::kGazetteer;
      } else if (mode == "remote") {
        c.mode = AnnotationMode::kRemote;
      } else {
        throw std::runtime_error("annotation.mode must be gazetteer or remote");
      }
      c.gazetteer_path = Resolve(base_dir, a.value("gazetteer", std::string()));
      c.blacklist_path = Resolve(base_dir, a.value("blacklist", std::string()));
      c.min_link_probability =
          a.value("min_link_probability", c.min_link_probability);
      if (a.contains("remote")) {
        const auto &r = a["remote"];
        auto &rc = c.remote;
        rc.endpoint_url = r.value("endpoint_url", rc.endpoint_url);
        rc.language = r.value("language", rc.language);
        rc.epsilon = r.value("epsilon", rc.epsilon);
        rc.rho_threshold = r.value("rho_threshold", rc.rho_threshold);
        rc.long_text = r.value("long_text", rc.long_text);
        rc.forward_q = r.value("forward_q", rc.forward_q);
        rc.max_retries = r.value("max_retries", rc.max_retries);
        rc.max_in_flight = r.value("max_in_flight", rc.max_in_flight);
        rc.timeout = std::chrono::milliseconds(
            r.value("timeout_ms", static_cast<int64_t>(rc.timeout.count())));
        rc.initial_backoff = std::chrono::milliseconds(r.value(
            "initial_backoff_ms",
            static_cast<int64_t>(rc.initial_backoff.count())));
      }
    }
    if (j.contains("series")) {
      c.min_docs = j["series"].value("min_docs", c.min_docs);
    }
    if (j.contains("trends")) {
      const auto &t = j["trends"];
      c.correction = ParseCorrection(
          t.value("correction", std::string(ToString(c.correction))));
      c.alpha = t.value("alpha", c.alpha);
      c.top_k = t.value("top_k", c.top_k);
    }
    if (j.contains("bursts")) {
      const auto &b = j["bursts"];
      c.burst.s = b.value("s", c.burst.s);
      c.burst.gamma = b.value("gamma", c.burst.gamma);
      c.burst.p1_cap = b.value("p1_cap", c.burst.p1_cap);
      c.burst_top_n = b.value("top_n", c.burst_top_n);
    }
    if (j.contains("render")) {
      const auto &r = j["render"];
      c.layout.width = r.value("width", c.layout.width);
      c.layout.row_height = r.value("row_height", c.layout.row_height);
      c.layout.min_thickness = r.value("min_thickness", c.layout.min_thickness);
      c.layout.max_thickness = r.value("max_thickness", c.layout.max_thickness);
      if (r.value("sort_by_weight", false)) {
        c.timeline_order = TimelineOrder::kWeight;
      }
    }
  } catch (const PipelineError &) {
    throw;
  } catch (const std::exception &e) {
    throw PipelineError("config", e.what());
  }
  if (const char *token = std::getenv(kTokenEnvVar)) {
    c.remote.api_token = token;
  }
  return c;
}

PipelineConfig LoadPipelineConfig(const fs::path &path) {
  std::string raw = Stage("config", [&] { return ReadFile(path); });
  return PipelineConfigFromJson(raw, path.parent_path());
}

std::string PipelineConfigToJson(const PipelineConfig &c) {
  Json j;
  j["corpus"] = c.corpus_path.string();
  j["corpus_format"] = c.corpus_format;
  j["out"] = c.out_dir.string();
  j["filter"]["year_min"] = c.filter.year_min;
  j["filter"]["year_max"] = c.filter.year_max;
  j["filter"]["doc_types"] = c.filter.allowed_doc_types;
  j["filter"]["languages"] = c.filter.allowed_languages;
  auto &a = j["annotation"];
  a["mode"] = c.mode == AnnotationMode::kGazetteer ? "gazetteer" : "remote";
  a["gazetteer"] = c.gazetteer_path.string();
  a["blacklist"] = c.blacklist_path.string();
  a["min_link_probability"] = c.min_link_probability;
  auto &r = a["remote"];
  r["endpoint_url"] = c.remote.endpoint_url;
  r["language"] = c.remote.language;
  r["epsilon"] = c.remote.epsilon;
  r["rho_threshold"] = c.remote.rho_threshold;
  r["long_text"] = c.remote.long_text;
  r["forward_q"] = c.remote.forward_q;
  r["max_retries"] = c.remote.max_retries;
  r["max_in_flight"] = c.remote.max_in_flight;
  r["timeout_ms"] = c.remote.timeout.count();
  r["initial_backoff_ms"] = c.remote.initial_backoff.count();
  j["series"]["min_docs"] = c.min_docs;
  j["trends"]["correction"] = ToString(c.correction);
  j["trends"]["alpha"] = c.alpha;
  j["trends"]["top_k"] = c.top_k;
  j["bursts"]["s"] = c.burst.s;
  j["bursts"]["gamma"] = c.burst.gamma;
  j["bursts"]["p1_cap"] = c.burst.p1_cap;
  j["bursts"]["top_n"] = c.burst_top_n;
  j["render"]["width"] = c.layout.width;
  j["render"]["row_height"] = c.layout.row_height;
  j["render"]["min_thickness"] = c.layout.min_thickness;
  j["render"]["max_thickness"] = c.layout.max_thickness;
  j["render"]["sort_by_weight"] = c.timeline_order == TimelineOrder::kWeight;
  return j.dump(1) + "\n";
}

std::string ReadFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const fs::path &path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("short write to " + path.string());
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                  nullptr)) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static const char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::vector<Document> LoadCorpus(const fs::path &path, std::string_view format) {
  std::string raw = ReadFile(path);
  std::string fmt(format);
  if (fmt == "auto") fmt = path.extension() == ".jsonl" ? "jsonl" : "wos";
  if (fmt == "jsonl") return ParseCanonicalJsonl(raw);
  if (fmt == "wos") return ParseWosExport(raw);
  throw std::invalid_argument("unknown corpus format '" + fmt + "'");
}

std::vector<EntityAnnotation> AnnotateCorpus(const std::vector<Document> &docs,
                                             const Gazetteer &gazetteer,
                                             double min_link_probability,
                                             const Blacklist &blacklist) {
  std::vector<std::vector<EntityAnnotation>> per_doc(docs.size());
  ParallelFor(docs.size(), [&](size_t i) {
    per_doc[i] = ApplyBlacklist(AnnotateGazetteer(MergeText(docs[i]), gazetteer,
                                                  min_link_probability,
                                                  docs[i].id),
                                blacklist);
  });
  std::vector<size_t> order(docs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return docs[a].id < docs[b].id; });
  std::vector<EntityAnnotation> out;
  for (size_t i : order) {
    out.insert(out.end(), std::make_move_iterator(per_doc[i].begin()),
               std::make_move_iterator(per_doc[i].end()));
  }
  return out;
}

TrendReport AnalyzeTrends(const SeriesSet &series, Correction correction,
                          double alpha, size_t top_k) {
  const auto &topics = series.topics;
  std::vector<std::optional<MannKendallResult>> results(topics.size());
  ParallelFor(topics.size(), [&](size_t i) {
    std::vector<double> x(topics[i].counts.begin(), topics[i].counts.end());
    try {
      results[i] = MannKendall(x, correction, alpha);
    } catch (const TrendError &e) {
      if (e.kind() != TrendError::Kind::kInsufficientData) throw;
    }
  });
  TrendReport report;
  report.correction = correction;
  report.alpha = alpha;
  report.top_k = top_k;
  for (size_t i = 0; i < topics.size(); ++i) {
    if (results[i]) {
      report.tested.emplace_back(topics[i].topic, *results[i]);
    } else {
      report.untestable.push_back(topics[i].topic);
    }
  }
  report.ranked = ClassifyAndRank(report.tested, top_k);
  return report;
}

PipelineOutputs RunPipeline(const PipelineConfig &config,
                            std::shared_ptr<HttpTransport> transport) {
  config.Validate();
  PipelineOutputs out;
  Json inputs;

  auto docs = Stage("ingest", [&] {
    std::string raw = ReadFile(config.corpus_path);
    inputs["corpus"] = {{"path", config.corpus_path.string()},
                        {"sha256", Sha256Hex(raw)}};
    return LoadCorpus(config.corpus_path, config.corpus_format);
  });
  docs = FilterCorpus(docs, config.filter);
  if (docs.empty()) {
    throw PipelineError("filter",
                        "EmptyCorpus: no documents survive the corpus filter");
  }

  Blacklist blacklist = Stage("blacklist", [&] {
    if (config.blacklist_path.empty()) return Blacklist::Default();
    std::string raw = ReadFile(config.blacklist_path);
    inputs["blacklist"] = {{"path", config.blacklist_path.string()},
                           {"sha256", Sha256Hex(raw)}};
    return Blacklist::FromText(raw);
  });

  auto annotations = Stage("annotate", [&] {
    if (config.mode == AnnotationMode::kGazetteer) {
      std::string raw = ReadFile(config.gazetteer_path);
      inputs["gazetteer"] = {{"path", config.gazetteer_path.string()},
                             {"sha256", Sha256Hex(raw)}};
      Gazetteer g = Gazetteer::FromTsv(raw);
      return AnnotateCorpus(docs, g, config.min_link_probability, blacklist);
    }
    RemoteAnnotator annotator(config.remote,
                              transport ? transport : MakeHttpTransport());
    return ApplyBlacklist(annotator.AnnotateAll(docs), blacklist);
  });

  SeriesSet series =
      Stage("series", [&] { return BuildSeries(docs, annotations, config.min_docs); });
  out.trends = Stage("trends", [&] {
    return AnalyzeTrends(series, config.correction, config.alpha, config.top_k);
  });
  out.bursts = Stage("bursts", [&] {
    return BurstTable(series, config.burst, config.burst_top_n);
  });

  std::map<std::string, std::string> files;
  Stage("render", [&] {
    TimelineLayout layout = config.layout;
    if (layout.year_min == 0 && layout.year_max == 0) {
      layout.year_min = series.totals.year_min;
      layout.year_max = series.totals.year_max;
    }
    files["annotations.jsonl"] = WriteAnnotationsJsonl(annotations);
    files["series.json"] = WriteSeriesJson(series);
    files["trends.csv"] = RenderTrendCsv(out.trends.ranked);
    files["trends.json"] = WriteTrendJson(out.trends);
    files["bursts.csv"] = RenderBurstCsv(out.bursts);
    files["bursts.json"] = WriteBurstJson(out.bursts);
    files["timeline.svg"] =
        RenderTimelineSvg(out.bursts, layout, config.timeline_order);
  });

  std::string config_json = PipelineConfigToJson(config);
  Json manifest;
  manifest["tool"] = "scitrend";
  manifest["version"] = kToolVersion;
  manifest["config"] = Json::parse(config_json);
  manifest["inputs"] = inputs;
  manifest["run_id"] = Sha256Hex(config_json + inputs.dump());
  for (const auto &[name, data] : files) {
    manifest["outputs"][name] = Sha256Hex(data);
  }
  files["manifest.json"] = manifest.dump(1) + "\n";

  Stage("write", [&] {
    fs::path target = config.out_dir.lexically_normal();
    if (target.filename().empty()) target = target.parent_path();
    fs::path staging =
        target.parent_path() / ("." + target.filename().string() + ".staging");
    fs::remove_all(staging);
    fs::create_directories(staging);
    for (const auto &[name, data] : files) WriteFile(staging / name, data);
    fs::create_directories(target);
    for (const auto &[name, data] : files) {
      fs::rename(staging / name, target / name);
      out.files[name] = target / name;
    }
    fs::remove_all(staging);
  });
  return out;
}

}  // namespace scitrend
