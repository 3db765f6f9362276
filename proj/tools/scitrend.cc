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

// Command-line front end: one subcommand per pipeline stage plus the
// end-to-end `pipeline` runner.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scitrend/pipeline.h"

namespace fs = std::filesystem;
using namespace scitrend;

namespace {

void Emit(const std::string &path, const std::string &data) {
  if (path.empty() || path == "-") {
    std::cout << data;
  } else {
    WriteFile(path, data);
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Topic trend and burst analysis for bibliographic corpora"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  // ingest
  auto *ingest = app.add_subcommand("ingest", "Parse and filter an export");
  std::string ingest_in, ingest_format = "auto", ingest_out;
  bool no_filter = false;
  CorpusFilter filter;
  std::vector<std::string> doc_types, languages;
  ingest->add_option("--input", ingest_in, "WoS TSV or canonical JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  ingest->add_option("--format", ingest_format, "auto, wos or jsonl")
      ->check(CLI::IsMember({"auto", "wos", "jsonl"}));
  ingest->add_option("--out", ingest_out, "Canonical JSONL output (- for stdout)");
  ingest->add_flag("--no-filter", no_filter, "Skip the corpus filter");
  ingest->add_option("--year-min", filter.year_min);
  ingest->add_option("--year-max", filter.year_max);
  ingest->add_option("--doc-type", doc_types, "Allowed document type");
  ingest->add_option("--language", languages, "Allowed language");

  // annotate
  auto *annotate = app.add_subcommand("annotate", "Link topics in a corpus");
  std::string ann_corpus, ann_gazetteer, ann_blacklist, ann_out;
  double min_link_probability = 0.0;
  AnnotatorConfig remote;
  annotate->add_option("--corpus", ann_corpus)->required()->check(CLI::ExistingFile);
  auto *gaz_opt = annotate->add_option("--gazetteer", ann_gazetteer,
                                       "Offline gazetteer TSV");
  auto *endpoint_opt = annotate->add_option("--endpoint", remote.endpoint_url,
                                            "Remote annotation service URL");
  gaz_opt->excludes(endpoint_opt);
  annotate->add_option("--blacklist", ann_blacklist, "One entity title per line");
  annotate->add_option("--min-link-probability", min_link_probability);
  annotate->add_option("--rho-threshold", remote.rho_threshold);
  annotate->add_option("--epsilon", remote.epsilon);
  annotate->add_option("--long-text", remote.long_text);
  annotate->add_option("--max-in-flight", remote.max_in_flight);
  annotate->add_option("--max-retries", remote.max_retries);
  annotate->add_flag("--forward-q", remote.forward_q,
                     "Send rho-threshold to the service as q");
  annotate->add_option("--out", ann_out, "Annotations JSONL");

  // series
  auto *series_cmd = app.add_subcommand("series", "Build topic-year series");
  std::string ser_corpus, ser_annotations, ser_out;
  int64_t min_docs = kDefaultMinDocs;
  series_cmd->add_option("--corpus", ser_corpus)->required()->check(CLI::ExistingFile);
  series_cmd->add_option("--annotations", ser_annotations)
      ->required()
      ->check(CLI::ExistingFile);
  series_cmd->add_option("--min-docs", min_docs);
  series_cmd->add_option("--out", ser_out);

  // trends
  auto *trends = app.add_subcommand("trends", "Mann-Kendall trend report");
  std::string tr_series, tr_csv, tr_json, correction = "hamed_rao_significant_lags";
  double alpha = kDefaultAlpha;
  size_t top_k = 20;
  trends->add_option("--series", tr_series)->required()->check(CLI::ExistingFile);
  trends->add_option("--alpha", alpha);
  trends->add_option("--correction", correction)
      ->check(CLI::IsMember(
          {"none", "hamed_rao_all_lags", "hamed_rao_significant_lags"}));
  trends->add_option("--top-k", top_k);
  trends->add_option("--csv", tr_csv);
  trends->add_option("--json", tr_json);

  // bursts
  auto *bursts = app.add_subcommand("bursts", "Two-state burst detection");
  std::string bu_series, bu_csv, bu_json;
  BurstParams params;
  size_t top_n = kDefaultBurstTopN;
  bursts->add_option("--series", bu_series)->required()->check(CLI::ExistingFile);
  bursts->add_option("--s", params.s);
  bursts->add_option("--gamma", params.gamma);
  bursts->add_option("--p1-cap", params.p1_cap);
  bursts->add_option("--top-n", top_n, "0 keeps every topic");
  bursts->add_option("--csv", bu_csv);
  bursts->add_option("--json", bu_json);

  // render
  auto *render = app.add_subcommand("render", "Render SVG charts");
  std::string re_bursts, re_series, re_out;
  std::vector<std::string> re_topics;
  bool sort_by_weight = false, cumulative = false;
  TimelineLayout layout;
  auto *bursts_opt =
      render->add_option("--bursts", re_bursts, "bursts.json for a timeline");
  auto *series_opt = render->add_option(
      "--series", re_series, "series.json for a publication-count chart");
  bursts_opt->excludes(series_opt);
  render->add_option("--topic", re_topics, "Topic to plot (series chart)");
  render->add_flag("--cumulative", cumulative, "Plot running totals");
  render->add_flag("--sort-by-weight", sort_by_weight);
  render->add_option("--width", layout.width);
  render->add_option("--year-min", layout.year_min);
  render->add_option("--year-max", layout.year_max);
  render->add_option("--out", re_out);

  // pipeline
  auto *pipeline = app.add_subcommand("pipeline", "Run every stage");
  std::string config_path, out_dir;
  double p_alpha = 0, p_gamma = 0, p_s = 0;
  int64_t p_min_docs = 0;
  size_t p_top_k = 0, p_top_n = 0;
  bool p_sort_by_weight = false;
  pipeline->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
  auto *o_alpha = pipeline->add_option("--alpha", p_alpha);
  auto *o_gamma = pipeline->add_option("--gamma", p_gamma);
  auto *o_s = pipeline->add_option("--s", p_s);
  auto *o_min_docs = pipeline->add_option("--min-docs", p_min_docs);
  auto *o_top_k = pipeline->add_option("--top-k", p_top_k);
  auto *o_top_n = pipeline->add_option("--burst-top-n", p_top_n);
  auto *o_out = pipeline->add_option("--out", out_dir);
  pipeline->add_flag("--sort-by-weight", p_sort_by_weight);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      auto docs = LoadCorpus(ingest_in, ingest_format);
      if (!no_filter) {
        if (!doc_types.empty()) {
          filter.allowed_doc_types = {doc_types.begin(), doc_types.end()};
        }
        if (!languages.empty()) {
          filter.allowed_languages = {languages.begin(), languages.end()};
        }
        docs = FilterCorpus(docs, filter);
      }
      Emit(ingest_out, WriteCanonicalJsonl(docs));
      std::cerr << docs.size() << " documents\n";
    } else if (*annotate) {
      if (ann_gazetteer.empty() == remote.endpoint_url.empty()) {
        std::cerr << "error: give exactly one of --gazetteer or --endpoint\n";
        return 2;
      }
      auto docs = LoadCorpus(ann_corpus);
      Blacklist blacklist = ann_blacklist.empty()
                                ? Blacklist::Default()
                                : Blacklist::FromText(ReadFile(ann_blacklist));
      std::vector<EntityAnnotation> annos;
      if (!ann_gazetteer.empty()) {
        Gazetteer g = Gazetteer::FromTsv(ReadFile(ann_gazetteer));
        annos = AnnotateCorpus(docs, g, min_link_probability, blacklist);
      } else {
        if (const char *token = std::getenv(kTokenEnvVar)) {
          remote.api_token = token;
        }
        RemoteAnnotator annotator(remote, MakeHttpTransport());
        annos = ApplyBlacklist(annotator.AnnotateAll(docs), blacklist);
      }
      Emit(ann_out, WriteAnnotationsJsonl(annos));
      std::cerr << annos.size() << " annotations\n";
    } else if (*series_cmd) {
      SeriesSet s = BuildSeries(LoadCorpus(ser_corpus),
                                ParseAnnotationsJsonl(ReadFile(ser_annotations)),
                                min_docs);
      Emit(ser_out, WriteSeriesJson(s));
      std::cerr << s.topics.size() << " topics\n";
    } else if (*trends) {
      TrendReport report =
          AnalyzeTrends(ParseSeriesJson(ReadFile(tr_series)),
                        ParseCorrection(correction), alpha, top_k);
      if (!tr_json.empty()) Emit(tr_json, WriteTrendJson(report));
      if (!tr_csv.empty() || tr_json.empty()) {
        Emit(tr_csv, RenderTrendCsv(report.ranked));
      }
    } else if (*bursts) {
      auto table = BurstTable(ParseSeriesJson(ReadFile(bu_series)), params, top_n);
      if (!bu_json.empty()) Emit(bu_json, WriteBurstJson(table));
      if (!bu_csv.empty() || bu_json.empty()) Emit(bu_csv, RenderBurstCsv(table));
    } else if (*render) {
      if (!re_bursts.empty()) {
        Emit(re_out, RenderTimelineSvg(
                         ParseBurstJson(ReadFile(re_bursts)), layout,
                         sort_by_weight ? TimelineOrder::kWeight
                                        : TimelineOrder::kStartYear));
      } else if (!re_series.empty()) {
        Emit(re_out, RenderSeriesSvg(ParseSeriesJson(ReadFile(re_series)),
                                     re_topics, cumulative));
      } else {
        std::cerr << "error: give --bursts or --series\n";
        return 2;
      }
    } else if (*pipeline) {
      PipelineConfig cfg = LoadPipelineConfig(config_path);
      if (*o_alpha) cfg.alpha = p_alpha;
      if (*o_gamma) cfg.burst.gamma = p_gamma;
      if (*o_s) cfg.burst.s = p_s;
      if (*o_min_docs) cfg.min_docs = p_min_docs;
      if (*o_top_k) cfg.top_k = p_top_k;
      if (*o_top_n) cfg.burst_top_n = p_top_n;
      if (*o_out) cfg.out_dir = out_dir;
      if (p_sort_by_weight) cfg.timeline_order = TimelineOrder::kWeight;
      PipelineOutputs result = RunPipeline(cfg);
      for (const auto &[name, path] : result.files) {
        std::cout << path.string() << "\n";
      }
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
