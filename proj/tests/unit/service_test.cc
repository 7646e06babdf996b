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


#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "gtest/gtest.h"
#include "httplib.h"
#include "modelwright/common/status.h"
#include "modelwright/service/config.h"
#include "modelwright/service/http_server.h"
#include "modelwright/service/service.h"
#include "support/coffee.h"
#include "support/json_schema.h"
#include "support/scripted.h"

namespace modelwright::service {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::Joined;
using testing::kTurn1;
using testing::kTurn2;
using testing::kTurn3;
using testing::Script;

constexpr char kProduction[] = R"({
  "variables": [{"name": "x"}, {"name": "y"}],
  "objective": {"sense": "maximize", "terms": {"x": 3, "y": 2}},
  "constraints": [
    {"name": "capacity", "terms": {"x": 1, "y": 1}, "sense": "<=", "rhs": 10},
    {"name": "x_limit", "terms": {"x": 1}, "sense": "<=", "rhs": 8}]})";

constexpr char kInfeasible[] = R"({
  "variables": [{"name": "x"}],
  "objective": {"sense": "minimize", "terms": {"x": 1}},
  "constraints": [{"name": "low", "terms": {"x": 1}, "sense": ">=", "rhs": 5},
                  {"name": "high", "terms": {"x": 1}, "sense": "<=", "rhs": 3}]})";

std::string FreshDir(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / ("mw_service_" + name);
  fs::remove_all(dir);
  return dir.string();
}

ServiceConfig TestConfig(const std::string& name) {
  ServiceConfig config;
  config.data_dir = FreshDir(name);
  config.max_upload_bytes = 4096;
  return config;
}

std::unique_ptr<Service> MustCreate(ServiceConfig config, llm::Backend& backend) {
  absl::StatusOr<std::unique_ptr<Service>> service =
      Service::Create(std::move(config), backend);
  EXPECT_TRUE(service.ok()) << service.status();
  return std::move(*service);
}

json Text(const std::string& text) { return json{{"text", text}}; }

const testing::SchemaChecker& Schema() {
  static const auto* checker = new testing::SchemaChecker(
      testing::SchemaChecker::FromFile(std::string(MODELWRIGHT_DATA_DIR) +
                                       "/../docs/api-schema.json"));
  return *checker;
}

void ExpectSchema(const ApiResponse& r) {
  const char* def = r.status >= 400             ? "Error"
                    : r.body.contains("id")     ? "Created"
                    : r.body.contains("file")   ? "Uploaded"
                    : r.body.contains("reply")  ? "Reply"
                                                : "Snapshot";
  for (const std::string& e : Schema().Check(r.body, def)) {
    ADD_FAILURE() << def << " " << e;
  }
}

// Delays every call and records the peak number of overlapping calls.
class SlowBackend : public llm::Backend {
 public:
  SlowBackend(llm::Backend& inner, std::chrono::milliseconds delay)
      : inner_(inner), delay_(delay) {}
  std::string Name() const override { return "slow"; }
  int peak() const { return peak_; }

 protected:
  absl::StatusOr<std::string> DoComplete(
      const std::vector<llm::ChatMessage>& messages) override {
    const int now = ++active_;
    int seen = peak_;
    while (now > seen && !peak_.compare_exchange_weak(seen, now)) {}
    std::this_thread::sleep_for(delay_);
    absl::StatusOr<llm::ChatMessage> reply = inner_.Complete(messages);
    --active_;
    if (!reply.ok()) return reply.status();
    return reply->content;
  }

 private:
  llm::Backend& inner_;
  std::chrono::milliseconds delay_;
  std::atomic<int> active_{0};
  std::atomic<int> peak_{0};
};

TEST(ConfigTest, ParsesDocumentedKeys) {
  absl::StatusOr<ServiceConfig> config = ParseConfig(R"(
# comment
listen = 0.0.0.0:9090
data_dir = /tmp/mw
backend = http
backend.endpoint = http://127.0.0.1:8000/v1/chat/completions
backend.model = qwen
backend.api_key_env = MW_API_KEY
backend.timeout_seconds = 12.5
backend.max_retries = 4
pipeline.max_retries = 3
pipeline.interpret_mode = model
solver.strict_epsilon = 0.001
solver.node_limit = 5000
equivalence_mode = scaled
max_upload_bytes = 2048
reply_budget_seconds = 1.5
)");
  ASSERT_TRUE(config.ok()) << config.status();
  EXPECT_EQ(config->host, "0.0.0.0");
  EXPECT_EQ(config->port, 9090);
  EXPECT_EQ(config->backend.kind, llm::BackendKind::kHttp);
  EXPECT_EQ(config->backend.api_key_env, "MW_API_KEY");
  EXPECT_EQ(config->backend.max_retries, 4);
  EXPECT_EQ(config->pipeline.max_retries, 3);
  EXPECT_EQ(config->pipeline.interpret_mode, pipeline::InterpretMode::kModel);
  EXPECT_EQ(config->pipeline.solver.strict_epsilon, Rational(1, 1000));
  EXPECT_EQ(config->pipeline.solver.node_limit, 5000);
  EXPECT_EQ(config->equivalence_mode, EquivalenceMode::kScaled);
  EXPECT_EQ(config->max_upload_bytes, 2048u);
  EXPECT_EQ(config->reply_budget_seconds, 1.5);
}

TEST(ConfigTest, RejectsUnknownDuplicateAndBadValues) {
  const std::string base = "backend.fixtures = f.json\n";
  EXPECT_TRUE(ParseConfig(base).ok());
  for (const std::string& bad :
       {base + "backend.api_key = sk-123\n", base + "colour = blue\n",
        base + "data_dir = a\ndata_dir = b\n", base + "listen = nowhere\n",
        base + "max_upload_bytes = -1\n", base + "equivalence_mode = fuzzy\n",
        base + "just words\n", std::string("backend = http\n")}) {
    absl::StatusOr<ServiceConfig> config = ParseConfig(bad);
    EXPECT_EQ(KindOf(config.status()), ErrorKind::kConfig) << bad;
  }
  EXPECT_EQ(KindOf(LoadConfig("/nonexistent/mw.conf").status()),
            ErrorKind::kMissingFile);
}

TEST(ServiceTest, UnwritableDataDirFailsAtStartup) {
  const std::string dir = FreshDir("unwritable");
  fs::create_directories(dir);
  std::ofstream(dir + "/plain-file") << "x";
  ServiceConfig config;
  config.data_dir = dir + "/plain-file/data";
  Script script;
  EXPECT_EQ(KindOf(Service::Create(config, script.backend()).status()),
            ErrorKind::kStorageFailure);
}

TEST(ServiceTest, SessionsAreDistinctAndSurviveRestart) {
  Script script;
  ServiceConfig config = TestConfig("restart");
  std::string a, b;
  {
    std::unique_ptr<Service> service = MustCreate(config, script.backend());
    ApiResponse first = service->CreateSession();
    ApiResponse second = service->CreateSession();
    ASSERT_EQ(first.status, 201);
    ExpectSchema(first);
    a = first.body["id"];
    b = second.body["id"];
    EXPECT_NE(a, b);
    EXPECT_EQ(first.body["session"]["status"], "gathering");
  }
  std::unique_ptr<Service> restarted = MustCreate(config, script.backend());
  ApiResponse got = restarted->GetSession(a);
  EXPECT_EQ(got.status, 200);
  EXPECT_EQ(got.body["session"]["id"], a);
  EXPECT_EQ(restarted->GetSession(b).status, 200);
  EXPECT_EQ(restarted->GetSession("0123456789abcdef").status, 404);
  EXPECT_EQ(restarted->GetSession("../../etc").status, 404);
}

TEST(ServiceTest, CoffeeConversationAndVisibility) {
  Script script;
  testing::ScriptCoffee(script);
  std::unique_ptr<Service> service =
      MustCreate(TestConfig("coffee"), script.backend());
  const std::string id = service->CreateSession().body["id"];

  ApiResponse r = service->PostMessage(id, Text(kTurn1).dump());
  ASSERT_EQ(r.status, 200) << r.body;
  ExpectSchema(r);
  EXPECT_EQ(r.body["reply"], "What do you want to maximize, and what limits apply?");
  EXPECT_EQ(r.body["session"]["status"], "gathering");
  r = service->PostMessage(id, Text(kTurn2).dump());
  EXPECT_EQ(r.body["reply"], "What limits your production?");
  r = service->PostMessage(id, Text(kTurn3).dump());
  ASSERT_EQ(r.status, 200);
  ExpectSchema(r);
  const json& session = r.body["session"];
  EXPECT_EQ(session["status"], "solved");
  EXPECT_EQ(session["visible"]["solve_result"]["objective_value"], 28);
  EXPECT_TRUE(session["visible"]["formulation"].is_object());
  EXPECT_TRUE(session["visible"]["code"].is_object());
  EXPECT_TRUE(session["visible"]["interpretation"].is_string());

  r = service->SetVisibility(id, R"({"show_formulas": false})");
  ASSERT_EQ(r.status, 200);
  ExpectSchema(r);
  EXPECT_FALSE(r.body["session"]["visible"].contains("formulation"));
  EXPECT_TRUE(r.body["session"]["visible"].contains("code"));
  r = service->SetVisibility(id, R"({"show_code": false})");
  EXPECT_FALSE(r.body["session"]["visible"].contains("code"));
  EXPECT_EQ(r.body["session"]["visible"]["solve_result"]["objective_value"], 28);
  const json full = json::parse(*service->FullState(id));
  EXPECT_TRUE(full["artifacts"]["formulation"].is_object());
  EXPECT_TRUE(full["artifacts"]["code"].is_object());
  EXPECT_EQ(service->SetVisibility(id, R"({"show_code": 1})").status, 400);
  EXPECT_EQ(service->SetVisibility(id, "{}").status, 400);
}

TEST(ServiceTest, EditsAndSolveErrors) {
  Script script;
  script.Relevance("make x and y", true);
  script.Completeness("make x and y", {});
  script.Formulation("make x and y", kProduction);
  script.Completeness("make x and y, somehow", {"constraints"}, "Which limits?");
  std::unique_ptr<Service> service =
      MustCreate(TestConfig("edits"), script.backend());
  const std::string id = service->CreateSession().body["id"];
  EXPECT_EQ(service->Solve(id).status, 409);
  EXPECT_EQ(service->EditArtifact(id, "formulation",
                                  json{{"content", kProduction}}.dump()).status,
            409);
  ASSERT_EQ(service->PostMessage(id, Text("make x and y").dump()).status, 200);

  json edited = json::parse(kProduction);
  edited["constraints"][0]["rhs"] = 12;
  ApiResponse r = service->EditArtifact(id, "formulation",
                                        json{{"content", edited}}.dump());
  ASSERT_EQ(r.status, 200) << r.body;
  ExpectSchema(r);
  EXPECT_EQ(r.body["session"]["visible"]["solve_result"]["objective_value"], 32);

  std::string code = r.body["session"]["visible"]["code"]["text"];
  code.erase(code.find(';'), 1);
  r = service->EditArtifact(id, "code", json{{"content", code}}.dump());
  ASSERT_EQ(r.status, 422);
  ExpectSchema(r);
  ASSERT_FALSE(r.body["diagnostics"].empty());
  EXPECT_GE(r.body["diagnostics"][0]["line"].get<int>(), 1);
  EXPECT_GE(r.body["diagnostics"][0]["column"].get<int>(), 1);
  EXPECT_EQ(r.body["session"]["status"], "failed");
  ApiResponse solve = service->Solve(id);
  EXPECT_EQ(solve.status, 409);
  ExpectSchema(solve);

  r = service->EditArtifact(id, "description",
                            json{{"content", "make x and y, somehow"}}.dump());
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["reply"], "Which limits?");
  EXPECT_EQ(r.body["session"]["status"], "gathering");
  EXPECT_TRUE(r.body["session"]["visible"]["formulation"].is_null());

  EXPECT_EQ(service->EditArtifact(id, "solution", R"({"content": "x"})").status, 404);
  EXPECT_EQ(service->EditArtifact(id, "code", R"({"text": "x"})").status, 400);
  EXPECT_EQ(service->EditArtifact("ffffffffffffffff", "code", "{}").status, 404);
  EXPECT_EQ(service->PostMessage(id, "not json").status, 400);
  EXPECT_EQ(service->PostMessage(id, Text("   ").dump()).status, 400);
}

TEST(ServiceTest, InfeasibleModelSolvesWith200) {
  Script script;
  script.Relevance("x between 5 and 3", true);
  script.Completeness("x between 5 and 3", {});
  script.Formulation("x between 5 and 3", kInfeasible);
  std::unique_ptr<Service> service =
      MustCreate(TestConfig("infeasible"), script.backend());
  const std::string id = service->CreateSession().body["id"];
  ApiResponse r = service->PostMessage(id, Text("x between 5 and 3").dump());
  ASSERT_EQ(r.status, 200);
  r = service->Solve(id);
  ASSERT_EQ(r.status, 200) << r.body;
  ExpectSchema(r);
  EXPECT_EQ(r.body["session"]["visible"]["solve_result"]["status"], "Infeasible");
  EXPECT_NE(r.body["reply"].get<std::string>().find("no assignment satisfies"),
            std::string::npos);
}

TEST(ServiceTest, UploadsAndDataBinding) {
  const std::string text = "Maximize x; the capacity C is in capacity.csv.";
  const std::string model = R"({
    "variables": [{"name": "x"}],
    "objective": {"sense": "maximize", "terms": {"x": 1}},
    "constraints": [{"name": "cap", "terms": {"x": 1}, "sense": "<=", "rhs": "C"}],
    "bindings": [{"parameter": "C", "source": {"kind": "file",
                  "path": "capacity.csv", "column": "cap", "row": 1}}]})";
  Script script;
  script.Relevance(text, true);
  script.Completeness(text, {});
  script.Formulation(text, model);
  std::unique_ptr<Service> service =
      MustCreate(TestConfig("uploads"), script.backend());
  const std::string id = service->CreateSession().body["id"];
  ApiResponse r = service->PostMessage(id, Text(text).dump());
  EXPECT_EQ(r.body["session"]["status"], "ready");

  std::string csv = "cap\n41\n";
  csv.resize(1000, '\n');
  r = service->UploadFile(id, "capacity.csv", csv);
  ASSERT_EQ(r.status, 201) << r.body;
  ExpectSchema(r);
  EXPECT_EQ(r.body["session"]["files"][0]["name"], "capacity.csv");
  EXPECT_EQ(r.body["session"]["files"][0]["size"], 1000);
  r = service->Solve(id);
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["session"]["visible"]["solve_result"]["assignment"]["x"], 41);

  EXPECT_EQ(service->UploadFile(id, "book.xlsx", "x").status, 415);
  EXPECT_EQ(service->UploadFile(id, "big.csv", std::string(5000, 'a')).status, 413);
  EXPECT_EQ(service->UploadFile(id, "../evil.csv", "a\n1\n").status, 400);
  EXPECT_EQ(service->UploadFile("ffffffffffffffff", "a.csv", "a\n1\n").status, 404);
}

TEST(ServiceTest, SlowRunsReportRunningAndRejectSecondPost) {
  Script script;
  testing::ScriptCoffee(script);
  SlowBackend slow(script.backend(), std::chrono::milliseconds(150));
  ServiceConfig config = TestConfig("budget");
  config.reply_budget_seconds = 0.05;
  std::unique_ptr<Service> service = MustCreate(config, slow);
  const std::string id = service->CreateSession().body["id"];

  ApiResponse r = service->PostMessage(id, Text(kTurn1).dump());
  ASSERT_EQ(r.status, 202);
  ExpectSchema(r);
  EXPECT_TRUE(r.body["reply"].is_null());
  EXPECT_EQ(r.body["session"]["status"], "running");
  EXPECT_EQ(service->PostMessage(id, Text(kTurn2).dump()).status, 409);
  EXPECT_EQ(service->Solve(id).status, 409);
  EXPECT_EQ(service->GetSession(id).body["session"]["status"], "running");
  service->WaitIdle(id);
  ApiResponse done = service->GetSession(id);
  EXPECT_EQ(done.body["session"]["status"], "gathering");
  EXPECT_EQ(done.body["session"]["last_reply"],
            "What do you want to maximize, and what limits apply?");
}

TEST(ServiceTest, ParallelPostsNeverOverlapWithinASession) {
  Script script;
  testing::ScriptCoffee(script);
  SlowBackend slow(script.backend(), std::chrono::milliseconds(5));
  std::unique_ptr<Service> service = MustCreate(TestConfig("stress"), slow);
  const std::string id = service->CreateSession().body["id"];
  std::atomic<int> ok{0}, busy{0}, other{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 16; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 10; ++i) {
        const int status =
            service->PostMessage(id, Text(t % 2 ? kTurn1 : kTurn2).dump()).status;
        (status == 200 ? ok : status == 409 ? busy : other)++;
      }
    });
  }
  for (std::thread& th : threads) th.join();
  service->WaitIdle(id);
  EXPECT_EQ(slow.peak(), 1);
  EXPECT_EQ(other, 0);
  EXPECT_GT(ok, 0);
  EXPECT_EQ(ok + busy, 160);
  const json full = json::parse(*service->FullState(id));
  EXPECT_EQ(full["turns"].size(), static_cast<std::size_t>(ok.load()));
}

TEST(ServiceTest, ConcurrentSessionsProceedIndependently) {
  Script script;
  testing::ScriptCoffee(script);
  std::unique_ptr<Service> service =
      MustCreate(TestConfig("many"), script.backend());
  std::vector<std::thread> threads;
  std::atomic<int> solved{0};
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&] {
      const std::string id = service->CreateSession().body["id"];
      ApiResponse r;
      for (const char* turn : {kTurn1, kTurn2, kTurn3}) {
        r = service->PostMessage(id, Text(turn).dump());
      }
      if (r.body["session"]["status"] == "solved") ++solved;
    });
  }
  for (std::thread& th : threads) th.join();
  EXPECT_EQ(solved, 8);
}

TEST(ServiceTest, ReplayAfterRestartIsByteIdentical) {
  Script script;
  testing::ScriptCoffee(script);
  ServiceConfig config = TestConfig("replay");
  std::string id, before;
  {
    std::unique_ptr<Service> service = MustCreate(config, script.backend());
    id = service->CreateSession().body["id"];
    for (const char* turn : {kTurn1, kTurn2, kTurn3}) {
      service->PostMessage(id, Text(turn).dump());
    }
    service->SetVisibility(id, R"({"show_code": false})");
    service->UploadFile(id, "d.csv", "a\n1\n");
    before = *service->FullState(id);
  }
  std::unique_ptr<Service> restarted = MustCreate(config, script.backend());
  EXPECT_EQ(*restarted->FullState(id), before);

  // A torn final write is ignored on reload.
  std::ofstream(config.data_dir + "/sessions/" + id + "/events.jsonl",
                std::ios::app)
      << R"({"seq": 99, "type": "rep)";
  std::unique_ptr<Service> again = MustCreate(config, script.backend());
  EXPECT_EQ(*again->FullState(id), before);
}

TEST(HttpServerTest, RoutesOverTheWire) {
  Script script;
  testing::ScriptCoffee(script);
  std::unique_ptr<Service> service =
      MustCreate(TestConfig("http"), script.backend());
  HttpServer server(*service);
  absl::StatusOr<int> port = server.Bind("127.0.0.1", 0);
  ASSERT_TRUE(port.ok());
  std::thread listener([&] { server.Listen(); });
  server.WaitUntilReady();

  httplib::Client client("127.0.0.1", *port);
  auto created = client.Post("/v1/sessions");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const std::string id = json::parse(created->body)["id"];
  const std::string base = "/v1/sessions/" + id;

  for (const char* turn : {kTurn1, kTurn2, kTurn3}) {
    auto res = client.Post(base + "/messages", Text(turn).dump(), "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
  }
  auto got = client.Get(base);
  ASSERT_TRUE(got);
  EXPECT_EQ(json::parse(got->body)["session"]["status"], "solved");

  auto vis = client.Put(base + "/visibility", R"({"show_formulas": false})",
                        "application/json");
  EXPECT_FALSE(json::parse(vis->body)["session"]["visible"].contains("formulation"));

  httplib::MultipartFormDataItems items = {
      {"file", "cap\n5\n", "caps.csv", "text/csv"}};
  auto up = client.Post(base + "/files", items);
  ASSERT_TRUE(up);
  EXPECT_EQ(up->status, 201) << up->body;
  auto raw = client.Post(base + "/files?name=more.json", "[1, 2]", "application/json");
  EXPECT_EQ(raw->status, 201);
  auto xlsx = client.Post(base + "/files?name=sheet.xlsx", "x", "application/octet-stream");
  EXPECT_EQ(xlsx->status, 415);
  auto big = client.Post(base + "/files?name=big.csv", std::string(5000, 'a'), "text/csv");
  EXPECT_EQ(big->status, 413);

  auto edit = client.Put(base + "/artifacts/code", R"({"content": "garbage ("})",
                         "application/json");
  EXPECT_EQ(edit->status, 422);
  EXPECT_FALSE(json::parse(edit->body)["diagnostics"].empty());
  auto solve = client.Post(base + "/solve");
  EXPECT_EQ(solve->status, 409);
  auto missing = client.Get("/v1/sessions/0000000000000000");
  EXPECT_EQ(missing->status, 404);
  EXPECT_TRUE(json::parse(missing->body).contains("error"));
  auto nowhere = client.Get("/v2/elsewhere");
  EXPECT_EQ(nowhere->status, 404);

  server.Stop();
  listener.join();
}

}  // namespace
}  // namespace modelwright::service
