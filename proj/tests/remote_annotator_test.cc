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

#include <deque>
#include <map>
#include <mutex>
#include <thread>

#include "doctest.h"
#include "httplib.h"

using namespace scitrend;
using namespace std::chrono_literals;

namespace {

const char *kOneAnnotation =
    R"({"annotations":[{"spot":"cloud computing","start":0,"end":15,)"
    R"("id":19541494,"title":"Cloud computing","rho":0.5}]})";

// Replays canned responses and records every request.
class ScriptedTransport : public HttpTransport {
 public:
  explicit ScriptedTransport(std::deque<HttpResponse> script)
      : script_(std::move(script)) {}

  HttpResponse PostForm(const std::string &url, const FormFields &form,
                        std::chrono::milliseconds) override {
    std::lock_guard<std::mutex> lock(mu_);
    urls.push_back(url);
    forms.push_back(form);
    if (script_.empty()) return {500, ""};
    HttpResponse r = script_.front();
    script_.pop_front();
    return r;
  }

  std::vector<std::string> urls;
  std::vector<FormFields> forms;

 private:
  std::mutex mu_;
  std::deque<HttpResponse> script_;
};

class FailingTransport : public HttpTransport {
 public:
  HttpResponse PostForm(const std::string &, const FormFields &,
                        std::chrono::milliseconds) override {
    throw AnnotatorError(AnnotatorError::Kind::kTransport, "connect refused");
  }
};

AnnotatorConfig Config() {
  AnnotatorConfig cfg;
  cfg.endpoint_url = "http://annotator.test/tag";
  cfg.api_token = "secret";
  return cfg;
}

std::string Field(const FormFields &form, const std::string &key) {
  for (const auto &[k, v] : form) {
    if (k == key) return v;
  }
  return "<missing>";
}

AnnotatorError::Kind FailureKind(RemoteAnnotator &annotator,
                                 const std::string &text) {
  try {
    annotator.Annotate(text);
  } catch (const AnnotatorError &e) {
    return e.kind();
  }
  FAIL("expected an AnnotatorError");
  return AnnotatorError::Kind::kTransport;
}

}  // namespace

TEST_CASE("response parsing: one annotation above the cutoff") {
  auto annos = ParseAnnotationResponse(kOneAnnotation, "cloud computing rocks",
                                       "D1", 0.16);
  REQUIRE(annos.size() == 1);
  CHECK(annos[0].entity_title == "Cloud computing");
  CHECK(annos[0].entity_id == "19541494");
  CHECK(annos[0].mention == "cloud computing");
  CHECK(annos[0].start == 0);
  CHECK(annos[0].end == 15);
  CHECK(annos[0].score == doctest::Approx(0.5));
  CHECK(annos[0].doc_id == "D1");
}

TEST_CASE("response parsing: rho below the cutoff is dropped") {
  std::string body = kOneAnnotation;
  body.replace(body.find("0.5"), 3, "0.10");
  CHECK(ParseAnnotationResponse(body, "cloud computing rocks", "D1", 0.16)
            .empty());
}

TEST_CASE("response parsing: overlaps keep the higher rho") {
  const char *body =
      R"({"annotations":[)"
      R"({"spot":"cloud","start":0,"end":5,"id":1,"title":"Cloud","rho":0.3},)"
      R"({"spot":"computing","start":6,"end":15,"id":3,"title":"Computing","rho":0.2},)"
      R"({"spot":"cloud computing","start":0,"end":15,"id":2,"title":"Cloud computing","rho":0.6}]})";
  auto annos = ParseAnnotationResponse(body, "cloud computing", "D", 0.0);
  REQUIRE(annos.size() == 1);
  CHECK(annos[0].entity_title == "Cloud computing");
}

TEST_CASE("response parsing: UTF-16 offsets map to byte offsets") {
  // "é" is one UTF-16 unit and two bytes; the emoji is two units, 4 bytes.
  const std::string text = "caf\xC3\xA9 \xF0\x9F\x98\x80 cloud";
  const char *body =
      R"({"annotations":[{"spot":"cloud","start":8,"end":13,"id":1,"title":"Cloud","rho":0.9}]})";
  auto annos = ParseAnnotationResponse(body, text, "D", 0.0);
  REQUIRE(annos.size() == 1);
  CHECK(text.substr(annos[0].start, annos[0].end - annos[0].start) == "cloud");
}

TEST_CASE("response parsing: malformed bodies") {
  auto kind = [](const std::string &body) {
    try {
      ParseAnnotationResponse(body, "cloud", "D", 0.0);
    } catch (const AnnotatorError &e) {
      return e.kind();
    }
    return AnnotatorError::Kind::kAuth;
  };
  CHECK(kind("{}") == AnnotatorError::Kind::kMalformedResponse);
  CHECK(kind("not json") == AnnotatorError::Kind::kMalformedResponse);
  CHECK(kind(R"({"annotations":{}})") ==
        AnnotatorError::Kind::kMalformedResponse);
  CHECK(kind(R"({"annotations":[{"start":0}]})") ==
        AnnotatorError::Kind::kMalformedResponse);
  CHECK(kind(R"({"annotations":[{"start":0,"end":99,"id":1,"title":"X","rho":1}]})") ==
        AnnotatorError::Kind::kMalformedResponse);
  CHECK(ParseAnnotationResponse(R"({"annotations":[]})", "x", "D", 0.0).empty());
}

TEST_CASE("request carries the configured form fields") {
  auto transport = std::make_shared<ScriptedTransport>(
      std::deque<HttpResponse>{{200, kOneAnnotation}});
  RemoteAnnotator annotator(Config(), transport);
  annotator.Annotate("cloud computing rocks");
  REQUIRE(transport->forms.size() == 1);
  const auto &form = transport->forms[0];
  CHECK(transport->urls[0] == "http://annotator.test/tag");
  CHECK(Field(form, "text") == "cloud computing rocks");
  CHECK(Field(form, "lang") == "en");
  CHECK(Field(form, "epsilon") == "0.427");
  CHECK(Field(form, "long_text") == "10");
  CHECK(Field(form, "token") == "secret");
  CHECK(Field(form, "q") == "<missing>");

  AnnotatorConfig cfg = Config();
  cfg.forward_q = true;
  CHECK(Field(RemoteAnnotator(cfg, transport).BuildForm("x"), "q") == "0.16");
}

TEST_CASE("rate limiting is retried with exponential backoff") {
  auto transport = std::make_shared<ScriptedTransport>(
      std::deque<HttpResponse>{{429, ""}, {200, kOneAnnotation}});
  std::vector<std::chrono::milliseconds> sleeps;
  RemoteAnnotator annotator(Config(), transport,
                            [&](auto d) { sleeps.push_back(d); });
  auto annos = annotator.Annotate("cloud computing rocks");
  CHECK(annos.size() == 1);
  CHECK(annotator.retries() == 1);
  REQUIRE(sleeps.size() == 1);
  CHECK(sleeps[0] == 500ms);

  AnnotatorConfig cfg = Config();
  cfg.max_retries = 2;
  auto limited = std::make_shared<ScriptedTransport>(
      std::deque<HttpResponse>{{429, ""}, {429, ""}, {429, ""}, {200, ""}});
  sleeps.clear();
  RemoteAnnotator stubborn(cfg, limited, [&](auto d) { sleeps.push_back(d); });
  CHECK(FailureKind(stubborn, "x") == AnnotatorError::Kind::kRateLimited);
  CHECK(limited->forms.size() == 3);
  CHECK(sleeps == std::vector<std::chrono::milliseconds>{500ms, 1000ms});
}

TEST_CASE("auth, transport and server failures") {
  for (int status : {401, 403}) {
    RemoteAnnotator a(Config(), std::make_shared<ScriptedTransport>(
                                    std::deque<HttpResponse>{{status, ""}}));
    CHECK(FailureKind(a, "x") == AnnotatorError::Kind::kAuth);
  }
  RemoteAnnotator down(Config(), std::make_shared<FailingTransport>());
  CHECK(FailureKind(down, "x") == AnnotatorError::Kind::kTransport);

  RemoteAnnotator broken(Config(), std::make_shared<ScriptedTransport>(
                                       std::deque<HttpResponse>{{200, "{}"}}));
  CHECK(FailureKind(broken, "x") == AnnotatorError::Kind::kMalformedResponse);

  AnnotatorConfig no_token = Config();
  no_token.api_token.clear();
  RemoteAnnotator anonymous(no_token, std::make_shared<FailingTransport>());
  CHECK(FailureKind(anonymous, "x") == AnnotatorError::Kind::kAuth);
}

TEST_CASE("batch annotation is ordered by doc id regardless of completion") {
  std::deque<HttpResponse> script;
  for (int i = 0; i < 12; ++i) script.push_back({200, kOneAnnotation});
  auto transport = std::make_shared<ScriptedTransport>(script);
  std::vector<Document> docs;
  for (int i = 11; i >= 0; --i) {
    char id[8];
    std::snprintf(id, sizeof(id), "D%02d", i);
    docs.push_back(Document{id, "cloud computing", "", 2010, "Article",
                            "English"});
  }
  auto annos = RemoteAnnotator(Config(), transport).AnnotateAll(docs);
  REQUIRE(annos.size() == 12);
  for (size_t i = 1; i < annos.size(); ++i) {
    CHECK(annos[i - 1].doc_id < annos[i].doc_id);
  }
}

TEST_CASE("batch annotation surfaces the first failure") {
  std::vector<Document> docs(5, Document{"", "t", "", 2010, "Article", "English"});
  for (size_t i = 0; i < docs.size(); ++i) docs[i].id = std::to_string(i);
  RemoteAnnotator annotator(Config(), std::make_shared<FailingTransport>());
  CHECK_THROWS_AS(annotator.AnnotateAll(docs), AnnotatorError);
}

TEST_CASE("HTTP transport against a local form-encoded endpoint") {
  httplib::Server server;
  std::map<std::string, std::string> seen;
  std::mutex mu;
  server.Post("/tag", [&](const httplib::Request &req, httplib::Response &res) {
    {
      std::lock_guard<std::mutex> lock(mu);
      for (const char *k : {"text", "lang", "epsilon", "long_text", "token"}) {
        seen[k] = req.get_param_value(k);
      }
    }
    if (req.get_param_value("token") != "secret") {
      res.status = 401;
      return;
    }
    res.set_content(kOneAnnotation, "application/json");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread serving([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  AnnotatorConfig cfg = Config();
  cfg.endpoint_url = "http://127.0.0.1:" + std::to_string(port) + "/tag";
  cfg.timeout = 5000ms;
  RemoteAnnotator annotator(cfg, MakeHttpTransport());
  auto annos = annotator.Annotate("cloud computing & more", "D1");
  REQUIRE(annos.size() == 1);
  CHECK(annos[0].entity_title == "Cloud computing");
  CHECK(seen["text"] == "cloud computing & more");
  CHECK(seen["epsilon"] == "0.427");
  CHECK(seen["long_text"] == "10");

  cfg.api_token = "wrong";
  RemoteAnnotator rejected(cfg, MakeHttpTransport());
  CHECK(FailureKind(rejected, "x") == AnnotatorError::Kind::kAuth);

  server.stop();
  serving.join();

  cfg.timeout = 1000ms;
  RemoteAnnotator unreachable(cfg, MakeHttpTransport());
  CHECK(FailureKind(unreachable, "x") == AnnotatorError::Kind::kTransport);
}
