// Copyright 2026 The Modelwright Authors
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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "httplib.h"
#include "modelwright/common/status.h"
#include "modelwright/llm/backend.h"
#include "modelwright/llm/http_backend.h"
#include "modelwright/llm/prompts.h"
#include "modelwright/llm/scripted_backend.h"

namespace modelwright::llm {
namespace {

std::vector<ChatMessage> UserAsks(const std::string& text) {
  return {ChatMessage{Role::kSystem, SystemInstruction().text},
          ChatMessage{Role::kUser, text}};
}

TEST(RenderTest, Examples) {
  PromptTemplate question{"q", "{Question}"};
  EXPECT_EQ(*Render(question, {{"Question", "How many?"}}), "How many?");

  absl::StatusOr<std::string> missing = Render(question, {});
  ASSERT_FALSE(missing.ok());
  EXPECT_EQ(KindOf(missing.status()), ErrorKind::kUnboundPlaceholder);
  EXPECT_NE(missing.status().message().find("Question"), std::string::npos);

  absl::StatusOr<std::string> prompt =
      Render(OneShotFormulation(), {{"Question_and_Answer_of_Case1", "CASE"},
                                    {"Question", "PROBLEM"}});
  ASSERT_TRUE(prompt.ok());
  EXPECT_EQ(*prompt,
            "You are an expert in mathematical programming. Please refer to "
            "Case 1 and provide a JSON expression for Problem 1 with "
            "explanations. Case1: CASE, Problem1: PROBLEM.");
}

TEST(RenderTest, SinglePassAndLiteralBraces) {
  PromptTemplate t{"t", "{\"a\": 1} {A} { B } {A}"};
  EXPECT_EQ(Placeholders(t), std::vector<std::string>{"A"});
  EXPECT_EQ(*Render(t, {{"A", "{B}"}, {"B", "no"}}),
            "{\"a\": 1} {B} { B } {B}");
  for (const PromptTemplate* shipped :
       {&SystemInstruction(), &FormulationFeedback(), &RelevanceCheck(),
        &CompletenessCheck(), &InterpretationParaphrase()}) {
    for (const std::string& name : Placeholders(*shipped)) {
      EXPECT_NE(name, "") << shipped->name;
    }
  }
  EXPECT_EQ(Placeholders(CompletenessCheck()),
            std::vector<std::string>{"Description"});
  EXPECT_EQ(Placeholders(FormulationFeedback()),
            (std::vector<std::string>{"Question", "Previous_Output",
                                      "Diagnostics"}));
}

TEST(ExtractJsonTest, FindsFirstObjectInProse) {
  EXPECT_EQ(*ExtractFirstJsonObject("Sure! ```json\n{\"a\": {\"b\": \"}\"}}"
                                    "\n``` and {\"c\": 2}"),
            nlohmann::json::parse(R"({"a": {"b": "}"}})"));
  EXPECT_EQ(*ExtractFirstJsonObject("{not json} then {\"ok\": true}"),
            nlohmann::json::parse(R"({"ok": true})"));
  EXPECT_FALSE(ExtractFirstJsonObject("no braces here").has_value());
  EXPECT_FALSE(ExtractFirstJsonObject("{\"open\": 1").has_value());
  EXPECT_TRUE(ExtractFirstJsonObject(DefaultCase()).has_value());
}

TEST(ScriptedBackendTest, KeyNormalization) {
  EXPECT_EQ(FixtureKey("Produce  two\nPRODUCTS "), FixtureKey("produce two products"));
  EXPECT_NE(FixtureKey("produce two products"), FixtureKey("produce 2 products"));
  EXPECT_EQ(FixtureKey("").size(), 16u);
  EXPECT_EQ(FixtureKey(""), "cbf29ce484222325");
}

TEST(ScriptedBackendTest, ReturnsFixtureVerbatimAndLogs) {
  const std::string reply = "{\"variables\": [\"x\"]}  with notes";
  ScriptedBackend backend;
  backend.Add("Produce two products using limited machine hours.", reply);
  Transcript session;
  absl::StatusOr<ChatMessage> out = backend.Complete(
      UserAsks("produce two   products using limited machine hours."),
      &session);
  ASSERT_TRUE(out.ok()) << out.status();
  EXPECT_EQ(out->role, Role::kAssistant);
  EXPECT_EQ(out->content, reply);
  ASSERT_EQ(session.size(), 1u);
  EXPECT_EQ(backend.transcript().size(), 1u);
  EXPECT_TRUE(session.PromptsContain("limited machine hours"));
  EXPECT_TRUE(session.PromptsContain("operation research expert"));
  EXPECT_EQ(*backend.Complete(UserAsks("produce two products using limited "
                                       "machine hours.")),
            *out);

  absl::StatusOr<ChatMessage> miss = backend.Complete(UserAsks("other"),
                                                      &session);
  ASSERT_FALSE(miss.ok());
  EXPECT_EQ(KindOf(miss.status()), ErrorKind::kFixtureMiss);
  ASSERT_EQ(session.size(), 2u);
  EXPECT_FALSE(session.Entries()[1].ok);
}

TEST(ScriptedBackendTest, Preconditions) {
  ScriptedBackend backend;
  EXPECT_EQ(KindOf(backend.Complete({}).status()), ErrorKind::kPrecondition);
  EXPECT_EQ(KindOf(backend.Complete({ChatMessage{Role::kAssistant, "hi"}})
                       .status()),
            ErrorKind::kPrecondition);
  EXPECT_EQ(KindOf(backend.Complete({ChatMessage{Role::kUser, ""}}).status()),
            ErrorKind::kPrecondition);
  EXPECT_EQ(backend.transcript().size(), 0u);
}

TEST(ScriptedBackendTest, LoadsFixtureFile) {
  const std::string path = ::testing::TempDir() + "/fixtures.json";
  {
    std::ofstream out(path);
    out << nlohmann::json{{FixtureKey("a"), "reply a"},
                          {FixtureKey("b"), {{"relevant", true}}}}
               .dump();
  }
  BackendConfig config;
  config.fixture_path = path;
  absl::StatusOr<std::unique_ptr<Backend>> backend = CreateBackend(config);
  ASSERT_TRUE(backend.ok()) << backend.status();
  EXPECT_EQ((*backend)->Complete(UserAsks("A"))->content, "reply a");
  EXPECT_EQ((*backend)->Complete(UserAsks("b"))->content, "{\"relevant\":true}");
  config.fixture_path = path + ".missing";
  EXPECT_EQ(KindOf(CreateBackend(config).status()), ErrorKind::kMissingFile);
}

TEST(TranscriptTest, ConcurrentAppendsAreAllKept) {
  ScriptedBackend backend;
  for (int i = 0; i < 8; ++i) backend.Add("q" + std::to_string(i), "r");
  Transcript session;
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&backend, &session, t] {
      for (int k = 0; k < 50; ++k) {
        ASSERT_TRUE(backend.Complete(UserAsks("q" + std::to_string(t)),
                                     &session)
                        .ok());
      }
    });
  }
  for (std::thread& t : threads) t.join();
  EXPECT_EQ(session.size(), 400u);
  EXPECT_EQ(backend.transcript().size(), 400u);
  const std::string jsonl = session.ToJsonl();
  EXPECT_EQ(std::count(jsonl.begin(), jsonl.end(), '\n'), 400);
}

TEST(CreateBackendTest, ValidatesConfig) {
  BackendConfig config;
  config.kind = BackendKind::kHttp;
  EXPECT_EQ(KindOf(CreateBackend(config).status()), ErrorKind::kConfig);
  config.endpoint = "http://127.0.0.1:1/v1/chat/completions";
  config.model = "m";
  EXPECT_TRUE(CreateBackend(config).ok());
  config.kind = BackendKind::kScripted;
  EXPECT_EQ(KindOf(CreateBackend(config).status()), ErrorKind::kConfig);
}

BackendConfig LocalConfig(int port) {
  BackendConfig config;
  config.kind = BackendKind::kHttp;
  config.endpoint =
      "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  config.model = "test-model";
  config.timeout_seconds = 2;
  config.max_retries = 2;
  config.initial_backoff_seconds = 0.01;
  return config;
}

// A loopback port that was free a moment ago and has no listener.
int ClosedPort() {
  const int fd = socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
  socklen_t length = sizeof(addr);
  getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &length);
  close(fd);
  return ntohs(addr.sin_port);
}

TEST(HttpBackendTest, UnreachableEndpointIsUnavailableAfterRetries) {
  BackendConfig config = LocalConfig(ClosedPort());
  HttpBackend backend(config);
  Transcript session;
  absl::StatusOr<ChatMessage> out = backend.Complete(UserAsks("hi"), &session);
  ASSERT_FALSE(out.ok());
  EXPECT_EQ(KindOf(out.status()), ErrorKind::kBackendUnavailable)
      << out.status();
  EXPECT_NE(out.status().message().find("3 attempt(s)"), std::string::npos)
      << out.status();
  EXPECT_EQ(session.size(), 1u);
}

class MockServer {
 public:
  MockServer() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Server& server() { return server_; }
  int port() const { return port_; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(HttpBackendTest, SpeaksChatCompletionsAndRetriesServerErrors) {
  std::atomic<int> calls{0};
  nlohmann::json last_request;
  std::string last_auth;
  MockServer mock;
  mock.server().Post("/v1/chat/completions",
                     [&](const httplib::Request& req, httplib::Response& res) {
                       if (calls.fetch_add(1) == 0) {
                         res.status = 503;
                         return;
                       }
                       last_request = nlohmann::json::parse(req.body);
                       last_auth = req.get_header_value("Authorization");
                       res.set_content(
                           R"({"choices":[{"message":{"role":"assistant","content":"pong"}}]})",
                           "application/json");
                     });
  setenv("MODELWRIGHT_TEST_KEY", "sk-test", 1);
  BackendConfig config = LocalConfig(mock.port());
  config.api_key_env = "MODELWRIGHT_TEST_KEY";
  HttpBackend backend(config);
  absl::StatusOr<ChatMessage> out = backend.Complete(UserAsks("ping"));
  ASSERT_TRUE(out.ok()) << out.status();
  EXPECT_EQ(out->content, "pong");
  EXPECT_EQ(calls.load(), 2);
  EXPECT_EQ(last_auth, "Bearer sk-test");
  EXPECT_EQ(last_request["model"], "test-model");
  EXPECT_EQ(last_request["temperature"], 0);
  ASSERT_EQ(last_request["messages"].size(), 2u);
  EXPECT_EQ(last_request["messages"][0]["role"], "system");
  EXPECT_EQ(last_request["messages"][1]["content"], "ping");
}

TEST(HttpBackendTest, ClientErrorsAndMalformedReplies) {
  MockServer mock;
  mock.server().Post("/bad", [](const httplib::Request&, httplib::Response& res) {
    res.status = 401;
  });
  mock.server().Post("/odd", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("{\"nope\": 1}", "application/json");
  });
  BackendConfig config = LocalConfig(mock.port());
  config.endpoint = "http://127.0.0.1:" + std::to_string(mock.port()) + "/bad";
  EXPECT_EQ(KindOf(HttpBackend(config).Complete(UserAsks("x")).status()),
            ErrorKind::kBackendUnavailable);
  config.endpoint = "http://127.0.0.1:" + std::to_string(mock.port()) + "/odd";
  EXPECT_EQ(KindOf(HttpBackend(config).Complete(UserAsks("x")).status()),
            ErrorKind::kMalformedModelOutput);
}

TEST(HttpBackendTest, SlowServerTimesOut) {
  MockServer mock;
  mock.server().Post("/v1/chat/completions",
                     [](const httplib::Request&, httplib::Response& res) {
                       std::this_thread::sleep_for(std::chrono::milliseconds(800));
                       res.set_content("{}", "application/json");
                     });
  BackendConfig config = LocalConfig(mock.port());
  config.timeout_seconds = 0.2;
  config.max_retries = 0;
  absl::StatusOr<ChatMessage> out = HttpBackend(config).Complete(UserAsks("x"));
  ASSERT_FALSE(out.ok());
  EXPECT_EQ(KindOf(out.status()), ErrorKind::kTimeout) << out.status();
}

}  // namespace
}  // namespace modelwright::llm
