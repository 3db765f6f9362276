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

#ifndef SCITREND_REMOTE_ANNOTATOR_H_
#define SCITREND_REMOTE_ANNOTATOR_H_

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scitrend/annotator.h"
#include "scitrend/corpus.h"

namespace scitrend {

struct HttpResponse {
  int status = 0;
  std::string body;
};

using FormFields = std::vector<std::pair<std::string, std::string>>;

// Minimal HTTP seam so the client can be exercised without a network.
// Implementations must be safe to call from several threads and throw
// AnnotatorError(kTransport) on connect or timeout failures.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse PostForm(const std::string &url,
                                const FormFields &form,
                                std::chrono::milliseconds timeout) = 0;
};

// cpp-httplib backed transport; supports http:// and https:// endpoints.
std::shared_ptr<HttpTransport> MakeHttpTransport();

// Parses a service response body. Elements of the "annotations" array carry
// spot, start, end, id, title and rho; start/end are UTF-16 code unit
// offsets into `text` and are converted to byte offsets. Annotations below
// rho_threshold are dropped and overlaps are resolved.
std::vector<EntityAnnotation> ParseAnnotationResponse(std::string_view body,
                                                      std::string_view text,
                                                      std::string_view doc_id,
                                                      double rho_threshold);

class RemoteAnnotator {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  RemoteAnnotator(AnnotatorConfig config,
                  std::shared_ptr<HttpTransport> transport,
                  Sleeper sleeper = nullptr);

  std::vector<EntityAnnotation> Annotate(std::string_view text,
                                         std::string_view doc_id = {}) const;

  // Annotates the merged text of every document with at most
  // config.max_in_flight concurrent requests. The result is ordered by
  // doc id, then start offset. The first failure is rethrown.
  std::vector<EntityAnnotation> AnnotateAll(
      const std::vector<Document> &docs) const;

  FormFields BuildForm(std::string_view text) const;

  // Number of rate-limited requests that were retried.
  int retries() const { return retries_.load(); }

 private:
  AnnotatorConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  Sleeper sleeper_;
  mutable std::atomic<int> retries_{0};
};

}  // namespace scitrend

#endif  // SCITREND_REMOTE_ANNOTATOR_H_
