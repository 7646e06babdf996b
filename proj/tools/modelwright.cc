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


// Command-line front end: evaluation, bootstrap generation, the HTTP
// service and single-model checking and solving.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "absl/strings/str_split.h"
#include "modelwright/common/status.h"
#include "modelwright/eval/evaluation.h"
#include "modelwright/ir/json_io.h"
#include "modelwright/lang/miniapl.h"
#include "modelwright/llm/scripted_backend.h"
#include "modelwright/pipeline/data.h"
#include "modelwright/pipeline/session.h"
#include "modelwright/pipeline/stages.h"
#include "modelwright/service/config.h"
#include "modelwright/service/http_server.h"
#include "modelwright/service/service.h"
#include "modelwright/solver/solver.h"

namespace mw = modelwright;
using nlohmann::json;

namespace {

int Fail(const absl::Status& status) {
  std::cerr << "error: " << status.message() << "\n";
  return mw::KindOf(status) == mw::ErrorKind::kConfig ? 2 : 1;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return mw::MakeError(mw::ErrorKind::kMissingFile, "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out.flush()) {
    return mw::MakeError(mw::ErrorKind::kStorageFailure, "cannot write " + path);
  }
  return absl::OkStatus();
}

struct BackendFlags {
  std::string kind;
  std::string fixtures;
  std::string config;
};

void AddBackendFlags(CLI::App* app, BackendFlags& flags) {
  auto* fixtures = app->add_option("--fixtures", flags.fixtures,
                                   "scripted backend fixture file");
  auto* config = app->add_option("--config", flags.config,
                                 "service config naming the backend");
  fixtures->excludes(config);
  app->add_option("--backend", flags.kind, "scripted or http")
      ->check(CLI::IsMember({"scripted", "http"}));
}

absl::StatusOr<std::unique_ptr<mw::llm::Backend>> MakeBackend(
    const BackendFlags& flags) {
  mw::llm::BackendConfig config;
  if (!flags.config.empty()) {
    MW_ASSIGN_OR_RETURN(mw::service::ServiceConfig service,
                        mw::service::LoadConfig(flags.config));
    config = service.backend;
  } else if (!flags.fixtures.empty()) {
    config.fixture_path = flags.fixtures;
  } else {
    return mw::MakeError(mw::ErrorKind::kConfig,
                         "pass --fixtures <file> or --config <file>");
  }
  const std::string kind =
      config.kind == mw::llm::BackendKind::kHttp ? "http" : "scripted";
  if (!flags.kind.empty() && flags.kind != kind) {
    return mw::MakeError(mw::ErrorKind::kConfig,
                         "--backend " + flags.kind + " conflicts with the " +
                             kind + " backend configured");
  }
  return mw::llm::CreateBackend(config);
}

// JSON files hold a ProblemIR; anything else is read as MiniAPL.
absl::StatusOr<mw::ProblemIR> LoadModel(const std::string& path) {
  MW_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    return mw::ParseProblemJson(text);
  }
  mw::lang::ParseResult parsed = mw::lang::Parse(text);
  if (auto* diagnostics = std::get_if<std::vector<mw::lang::Diagnostic>>(&parsed)) {
    std::string report;
    for (const mw::lang::Diagnostic& d : *diagnostics) {
      report += path + ":" + mw::lang::FormatDiagnostic(d) + "\n";
    }
    return mw::MakeError(mw::ErrorKind::kInvalidIR, report);
  }
  return std::get<mw::ProblemIR>(std::move(parsed));
}

int RunEval(const std::string& dataset, const BackendFlags& flags,
            const std::string& mode, bool alpha, int threads, int retries,
            const std::string& report_path) {
  absl::StatusOr<std::vector<mw::eval::EvalSample>> samples =
      mw::eval::LoadDataset(dataset);
  if (!samples.ok()) return Fail(samples.status());
  absl::StatusOr<std::unique_ptr<mw::llm::Backend>> backend = MakeBackend(flags);
  if (!backend.ok()) return Fail(backend.status());
  mw::eval::EvalOptions options;
  if (!mode.empty()) {
    options.mode = *mw::ParseEquivalenceMode(mode);
  } else if (!flags.config.empty()) {
    absl::StatusOr<mw::service::ServiceConfig> config =
        mw::service::LoadConfig(flags.config);
    if (!config.ok()) return Fail(config.status());
    options.mode = config->equivalence_mode;
  }
  options.alpha_rename = alpha;
  options.threads = threads;
  options.max_retries = retries;
  const std::string name =
      std::filesystem::path(dataset).stem().string();
  absl::StatusOr<mw::eval::EvalReport> report = mw::eval::Evaluate(
      name, *samples, **backend, mw::llm::OneShotFormulation(), options);
  if (!report.ok()) return Fail(report.status());
  std::cout << mw::eval::FormatTable(*report);
  if (!report_path.empty()) {
    absl::Status written =
        WriteFile(report_path, mw::eval::ToJson(*report).dump(2) + "\n");
    if (!written.ok()) return Fail(written);
  }
  return 0;
}

int RunBootstrap(const std::string& seeds_path, int n, const BackendFlags& flags,
                 const std::string& out) {
  absl::StatusOr<std::vector<mw::eval::EvalSample>> seeds =
      mw::eval::LoadDataset(seeds_path);
  if (!seeds.ok()) return Fail(seeds.status());
  absl::StatusOr<std::unique_ptr<mw::llm::Backend>> backend = MakeBackend(flags);
  if (!backend.ok()) return Fail(backend.status());
  absl::StatusOr<std::vector<mw::eval::Candidate>> candidates =
      mw::eval::BootstrapGenerate(*seeds, n, **backend);
  if (!candidates.ok()) return Fail(candidates.status());
  absl::Status written = mw::eval::WriteQueue(out, *candidates);
  if (!written.ok()) return Fail(written);
  int valid = 0;
  for (const mw::eval::Candidate& c : *candidates) valid += c.valid;
  std::cout << candidates->size() << " candidate(s) queued in " << out << " ("
            << valid << " valid)\n";
  return 0;
}

int RunServe(const std::string& config_path) {
  absl::StatusOr<mw::service::ServiceConfig> config =
      mw::service::LoadConfig(config_path);
  if (!config.ok()) return Fail(config.status());
  absl::StatusOr<std::unique_ptr<mw::llm::Backend>> backend =
      mw::llm::CreateBackend(config->backend);
  if (!backend.ok()) return Fail(backend.status());
  absl::StatusOr<std::unique_ptr<mw::service::Service>> service =
      mw::service::Service::Create(*config, **backend);
  if (!service.ok()) return Fail(service.status());

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  mw::service::HttpServer server(**service);
  absl::StatusOr<int> port = server.Bind(config->host, config->port);
  if (!port.ok()) return Fail(port.status());
  std::cout << "listening on http://" << config->host << ":" << *port
            << " (data in " << config->data_dir << ")" << std::endl;
  std::thread stopper([&] {
    int received = 0;
    sigwait(&signals, &received);
    server.Stop();
  });
  server.Listen();
  pthread_kill(stopper.native_handle(), SIGTERM);
  stopper.join();
  return 0;
}

int RunCheck(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return Fail(text.status());
  const std::vector<mw::lang::Diagnostic> diagnostics =
      mw::lang::GrammarCheck(mw::lang::SourceFile{*text});
  for (const mw::lang::Diagnostic& d : diagnostics) {
    std::cout << path << ":" << mw::lang::FormatDiagnostic(d) << "\n";
  }
  if (diagnostics.empty()) std::cout << path << ": ok\n";
  return diagnostics.empty() ? 0 : 1;
}

int RunSolve(const std::string& path, const std::vector<std::string>& data,
             bool lp, bool as_json) {
  absl::StatusOr<mw::ProblemIR> problem = LoadModel(path);
  if (!problem.ok()) return Fail(problem.status());
  mw::pipeline::FileContents files;
  for (const std::string& file : data) {
    absl::StatusOr<std::string> contents = ReadFile(file);
    if (!contents.ok()) return Fail(contents.status());
    files[std::filesystem::path(file).filename().string()] = *contents;
  }
  absl::StatusOr<mw::ProblemIR> bound = mw::pipeline::BindData(*problem, files);
  if (!bound.ok()) return Fail(bound.status());
  if (lp) {
    absl::StatusOr<std::string> text = mw::solver::ExportLp(*bound);
    if (!text.ok()) return Fail(text.status());
    std::cout << *text;
    return 0;
  }
  absl::StatusOr<mw::solver::SolveResult> result = mw::solver::Solve(*bound);
  if (!result.ok()) return Fail(result.status());
  if (as_json) {
    std::cout << mw::pipeline::ToJson(*result).dump(2) << "\n";
  } else {
    std::string text = mw::pipeline::TemplateInterpretation(*bound, *result);
    if (text.empty() || text.back() != '\n') text += '\n';
    std::cout << text;
  }
  return 0;
}

int RunFixtures(const std::string& dataset, const std::string& drop,
                const std::string& out) {
  absl::StatusOr<std::vector<mw::eval::EvalSample>> samples =
      mw::eval::LoadDataset(dataset);
  if (!samples.ok()) return Fail(samples.status());
  std::vector<std::string> ids;
  if (!drop.empty()) ids = absl::StrSplit(drop, ',');
  json doc = mw::eval::BuildFixtures(*samples, ids);
  absl::Status written = WriteFile(out, doc.dump(2) + "\n");
  if (!written.ok()) return Fail(written);
  std::cout << doc.size() << " fixture(s) written to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modelwright: natural-language optimization modeling"};
  app.require_subcommand(1);

  std::string dataset, mode, report, seeds, out, config, path,
                       drop, text;
  bool alpha = false, lp = false, as_json = false;
  int threads = 4, retries = 2, n = 10;
  std::vector<std::string> data;
  BackendFlags backend_flags;

  CLI::App* eval = app.add_subcommand("eval", "score a dataset");
  eval->add_option("--dataset", dataset, "JSONL dataset")->required();
  AddBackendFlags(eval, backend_flags);
  eval->add_option("--mode", mode,
                  "strict or scaled (default: the config's, else strict)")
      ->check(CLI::IsMember({"strict", "scaled"}));
  eval->add_flag("--alpha-rename", alpha, "accept renamed variables");
  eval->add_option("--threads", threads)->check(CLI::PositiveNumber);
  eval->add_option("--max-retries", retries)->check(CLI::NonNegativeNumber);
  eval->add_option("--report", report, "write the JSON report here");

  CLI::App* bootstrap = app.add_subcommand("bootstrap", "propose new samples");
  bootstrap->add_option("--seeds", seeds, "JSONL seed dataset")->required();
  bootstrap->add_option("--n", n, "number of candidates")->check(CLI::PositiveNumber);
  bootstrap->add_option("--out", out, "review queue (JSONL, appended)")->required();
  AddBackendFlags(bootstrap, backend_flags);

  CLI::App* serve = app.add_subcommand("serve", "run the HTTP service");
  serve->add_option("--config", config, "key = value config file")->required();

  CLI::App* check = app.add_subcommand("check", "grammar-check a MiniAPL file");
  check->add_option("file", path)->required();

  CLI::App* solve = app.add_subcommand("solve", "solve a MiniAPL or JSON model");
  solve->add_option("file", path)->required();
  solve->add_option("--data", data, "CSV/JSON data files for bindings");
  solve->add_flag("--lp", lp, "print LP text instead of solving");
  solve->add_flag("--json", as_json, "print the raw result");

  CLI::App* fixtures = app.add_subcommand("fixtures", "gold-answer fixtures");
  fixtures->add_option("--dataset", dataset)->required();
  fixtures->add_option("--drop-last-constraint", drop, "comma-separated ids");
  fixtures->add_option("--out", out)->required();

  CLI::App* key = app.add_subcommand("fixture-key", "hash a prompt");
  key->add_option("text", text)->required();

  CLI11_PARSE(app, argc, argv);

  if (*eval) return RunEval(dataset, backend_flags, mode, alpha, threads, retries, report);
  if (*bootstrap) return RunBootstrap(seeds, n, backend_flags, out);
  if (*serve) return RunServe(config);
  if (*check) return RunCheck(path);
  if (*solve) return RunSolve(path, data, lp, as_json);
  if (*fixtures) return RunFixtures(dataset, drop, out);
  if (*key) {
    std::cout << mw::llm::FixtureKey(text) << "\n";
    return 0;
  }
  return 0;
}
