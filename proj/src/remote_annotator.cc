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

#include "scitrend/remote_annotator.h"

#include <algorithm>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace scitrend {

namespace {

using Json = nlohmann::json;

AnnotatorError Malformed(const std::string &msg) {
  return AnnotatorError(AnnotatorError::Kind::kMalformedResponse, msg);
}

// byte_offset[u] is the byte offset of UTF-16 code unit u; one extra slot
// holds the text length.
std::vector<size_t> Utf16ToByteOffsets(std::string_view text) {
  std::vector<size_t> offsets;
  offsets.reserve(text.size() + 1);
  size_t i = 0;
  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    size_t len = 1;
    if (c >= 0xF0) {
      len = 4;
    } else if (c >= 0xE0) {
      len = 3;
    } else if (c >= 0xC0) {
      len = 2;
    }
    len = std::min(len, text.size() - i);
    offsets.push_back(i);
    // Supplementary-plane code points take a surrogate pair.
    if (len == 4) offsets.push_back(i);
    i += len;
  }
  offsets.push_back(text.size());
  return offsets;
}

std::string IdToString(const Json &id) {
  if (id.is_string()) return id.get<std::string>();
  if (id.is_number_integer()) return std::to_string(id.get<long long>());
  return id.dump();
}

class HttplibTransport : public HttpTransport {
 public:
  HttpResponse PostForm(const std::string &url, const FormFields &form,
                        std::chrono::milliseconds timeout) override {
    size_t scheme = url.find("://");
    size_t path_at = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    std::string base = url.substr(0, path_at);
    std::string path =
        path_at == std::string::npos ? std::string("/") : url.substr(path_at);

    httplib::Client client(base);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
        timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    httplib::Params params;
    for (const auto &[k, v] : form) params.emplace(k, v);
    auto res = client.Post(path, params);
    if (!res) {
      throw AnnotatorError(AnnotatorError::Kind::kTransport,
                           "POST " + url + " failed: " +
                               httplib::to_string(res.error()));
    }
    return HttpResponse{res->status, res->body};
  }
};

}  // namespace

std::shared_ptr<HttpTransport> MakeHttpTransport() {
  return std::make_shared<HttplibTransport>();
}

std::vector<EntityAnnotation> ParseAnnotationResponse(std::string_view body,
                                                      std::string_view text,
                                                      std::string_view doc_id,
                                                      double rho_threshold) {
  Json j;
  try {
    j = Json::parse(body);
  } catch (const Json::parse_error &e) {
    throw Malformed(std::string("response is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("annotations") ||
      !j["annotations"].is_array()) {
    throw Malformed("response lacks an \"annotations\" array");
  }

  std::vector<size_t> offsets = Utf16ToByteOffsets(text);
  std::vector<EntityAnnotation> out;
  for (const Json &item : j["annotations"]) {
    EntityAnnotation a;
    size_t start16 = 0;
    size_t end16 = 0;
    try {
      a.score = item.at("rho").get<double>();
      start16 = item.at("start").get<size_t>();
      end16 = item.at("end").get<size_t>();
      a.entity_id = IdToString(item.at("id"));
      a.entity_title = item.at("title").get<std::string>();
      a.mention = item.value("spot", std::string());
    } catch (const Json::exception &e) {
      throw Malformed(std::string("bad annotation element: ") + e.what());
    }
    if (a.score < rho_threshold) continue;
    if (start16 >= end16 || end16 >= offsets.size()) {
      throw Malformed("annotation span [" + std::to_string(start16) + "," +
                      std::to_string(end16) + ") outside the text");
    }
    a.doc_id = std::string(doc_id);
    a.start = offsets[start16];
    a.end = offsets[end16];
    if (a.mention.empty()) {
      a.mention = std::string(text.substr(a.start, a.end - a.start));
    }
    out.push_back(std::move(a));
  }
  return ResolveOverlaps(std::move(out));
}

RemoteAnnotator::RemoteAnnotator(AnnotatorConfig config,
                                 std::shared_ptr<HttpTransport> transport,
                                 Sleeper sleeper)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)) {
  config_.Validate();
  if (!sleeper_) {
    sleeper_ = [](std::chrono::milliseconds d) {
      std::this_thread::sleep_for(d);
    };
  }
}

FormFields RemoteAnnotator::BuildForm(std::string_view text) const {
  auto num = [](double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << v;
    return os.str();
  };
  FormFields form = {
      {"text", std::string(text)},
      {"lang", config_.language},
      {"epsilon", num(config_.epsilon)},
      {"long_text", std::to_string(config_.long_text)},
      {"token", config_.api_token},
  };
  if (config_.forward_q) form.emplace_back("q", num(config_.rho_threshold));
  return form;
}

std::vector<EntityAnnotation> RemoteAnnotator::Annotate(
    std::string_view text, std::string_view doc_id) const {
  if (config_.api_token.empty()) {
    throw AnnotatorError(AnnotatorError::Kind::kAuth, "no API token set");
  }
  FormFields form = BuildForm(text);
  std::chrono::milliseconds backoff = config_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    HttpResponse res =
        transport_->PostForm(config_.endpoint_url, form, config_.timeout);
    if (res.status == 401 || res.status == 403) {
      throw AnnotatorError(AnnotatorError::Kind::kAuth,
                           "annotation service rejected the token (HTTP " +
                               std::to_string(res.status) + ")");
    }
    if (res.status == 429) {
      if (attempt >= config_.max_retries) {
        throw AnnotatorError(AnnotatorError::Kind::kRateLimited,
                             "rate limited after " + std::to_string(attempt) +
                                 " retries");
      }
      ++retries_;
      sleeper_(backoff);
      backoff *= 2;
      continue;
    }
    if (res.status < 200 || res.status >= 300) {
      throw AnnotatorError(AnnotatorError::Kind::kTransport,
                           "annotation service returned HTTP " +
                               std::to_string(res.status));
    }
    return ParseAnnotationResponse(res.body, text, doc_id,
                                   config_.rho_threshold);
  }
}

std::vector<EntityAnnotation> RemoteAnnotator::AnnotateAll(
    const std::vector<Document> &docs) const {
  std::vector<std::vector<EntityAnnotation>> per_doc(docs.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;

  auto worker = [&] {
    while (!failed.load()) {
      size_t i = next.fetch_add(1);
      if (i >= docs.size()) return;
      try {
        per_doc[i] = Annotate(MergeText(docs[i]), docs[i].id);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  size_t n_workers =
      std::min(docs.size(), static_cast<size_t>(config_.max_in_flight));
  std::vector<std::thread> workers;
  for (size_t w = 0; w < n_workers; ++w) workers.emplace_back(worker);
  for (auto &t : workers) t.join();
  if (error) std::rethrow_exception(error);

  std::vector<size_t> order(docs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return docs[a].id < docs[b].id; });
  std::vector<EntityAnnotation> out;
  for (size_t i : order) {
    out.insert(out.end(), per_doc[i].begin(), per_doc[i].end());
  }
  return out;
}

}  // namespace scitrend
