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

#ifndef SCITREND_PIPELINE_H_
#define SCITREND_PIPELINE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scitrend/annotator.h"
#include "scitrend/burst.h"
#include "scitrend/corpus.h"
#include "scitrend/remote_annotator.h"
#include "scitrend/report.h"
#include "scitrend/series.h"
#include "scitrend/trend.h"

namespace scitrend {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr const char *kTokenEnvVar = "ANNOTATOR_API_TOKEN";

enum class AnnotationMode { kGazetteer, kRemote };

struct PipelineConfig {
  std::filesystem::path corpus_path;
  // "auto" picks by extension: .jsonl is canonical, anything else WoS TSV.
  std::string corpus_format = "auto";
  CorpusFilter filter;

  AnnotationMode mode = AnnotationMode::kGazetteer;
  std::filesystem::path gazetteer_path;
  double min_link_probability = 0.0;
  AnnotatorConfig remote;
  // Empty means the built-in default blacklist.
  std::filesystem::path blacklist_path;

  int64_t min_docs = kDefaultMinDocs;
  Correction correction = Correction::kHamedRaoSignificantLags;
  double alpha = kDefaultAlpha;
  size_t top_k = 20;

  BurstParams burst;
  size_t burst_top_n = kDefaultBurstTopN;
  TimelineLayout layout;
  TimelineOrder timeline_order = TimelineOrder::kStartYear;

  std::filesystem::path out_dir = "out";

  // Throws PipelineError(stage "config") when inconsistent.
  void Validate() const;
};

// Reads a JSON config file. Relative paths inside it resolve against the
// file's directory. The API token is taken from ANNOTATOR_API_TOKEN.
PipelineConfig LoadPipelineConfig(const std::filesystem::path &path);
PipelineConfig PipelineConfigFromJson(std::string_view json,
                                      const std::filesystem::path &base_dir);
// Canonical JSON echo of the config, secrets omitted.
std::string PipelineConfigToJson(const PipelineConfig &config);

class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string &what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string &stage() const { return stage_; }

 private:
  std::string stage_;
};

std::string ReadFile(const std::filesystem::path &path);
void WriteFile(const std::filesystem::path &path, std::string_view data);
std::string Sha256Hex(std::string_view data);

std::vector<Document> LoadCorpus(const std::filesystem::path &path,
                                 std::string_view format = "auto");

// Gazetteer annotation of every document's merged text followed by the
// blacklist. Output is ordered by doc id, then start offset.
std::vector<EntityAnnotation> AnnotateCorpus(const std::vector<Document> &docs,
                                             const Gazetteer &gazetteer,
                                             double min_link_probability,
                                             const Blacklist &blacklist);

// Mann-Kendall on every topic's document-frequency series plus ranking.
TrendReport AnalyzeTrends(const SeriesSet &series, Correction correction,
                          double alpha, size_t top_k);

struct PipelineOutputs {
  // Output file name -> final path.
  std::map<std::string, std::filesystem::path> files;
  TrendReport trends;
  std::vector<BurstInterval> bursts;
};

// ingest -> filter -> annotate -> blacklist -> series -> trends -> bursts
// -> render. Files are staged in a sibling temp directory and moved into
// out_dir only after every stage succeeds. `transport` is used in remote
// mode; null selects the built-in HTTP client.
PipelineOutputs RunPipeline(const PipelineConfig &config,
                            std::shared_ptr<HttpTransport> transport = nullptr);

}  // namespace scitrend

#endif  // SCITREND_PIPELINE_H_
