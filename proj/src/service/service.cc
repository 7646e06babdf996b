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


#include "modelwright/service/service.h"

#include <chrono>
#include <future>

#include "absl/strings/str_cat.h"
#include "modelwright/common/status.h"
#include "modelwright/common/strings.h"

namespace modelwright::service {
namespace {

using nlohmann::json;

int HttpStatusFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kPrecondition: return 409;
    case ErrorKind::kInvalidIR: return 422;
    default: return 500;
  }
}

ApiResponse FromStatus(const absl::Status& status) {
  const ErrorKind kind = KindOf(status);
  return ErrorResponse(HttpStatusFor(kind), ErrorKindName(kind),
                       std::string(status.message()));
}

ApiResponse UnknownSession(const std::string& id) {
  return ErrorResponse(404, "NotFound", absl::StrCat("no session '", id, "'"));
}

ApiResponse Busy() {
  return ErrorResponse(409, "RunInFlight",
                       "a pipeline run for this session is still in flight");
}

std::optional<json> ParseBody(const std::string& body) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
  return doc;
}

ApiResponse BadBody(const std::string& what) {
  return ErrorResponse(400, "BadRequest", what);
}

bool IsSafeFileName(const std::string& name) {
  if (name.empty() || name.size() > 128 || name[0] == '.') return false;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

ApiResponse ErrorResponse(int status, const std::string& kind,
                          const std::string& message) {
  return {status, json{{"error", {{"kind", kind}, {"message", message}}}}};
}

absl::StatusOr<std::unique_ptr<Service>> Service::Create(
    ServiceConfig config, llm::Backend& backend) {
  MW_RETURN_IF_ERROR(PrepareDataDir(config.data_dir));
  return std::unique_ptr<Service>(new Service(std::move(config), backend));
}

Service::Service(ServiceConfig config, llm::Backend& backend)
    : config_(std::move(config)),
      store_(config_.data_dir),
      pipeline_(backend, config_.pipeline) {}

Service::~Service() {
  std::map<std::string, std::shared_ptr<Entry>> entries;
  {
    std::lock_guard<std::mutex> lock(mu_);
    entries = entries_;
  }
  for (auto& [id, entry] : entries) {
    std::thread worker;
    {
      std::lock_guard<std::mutex> lock(entry->mu);
      worker = std::move(entry->worker);
    }
    if (worker.joinable()) worker.join();
  }
}

std::unique_ptr<pipeline::SessionRecorder> Service::MakeRecorder(
    const std::string& id, pipeline::Session session) {
  const SessionStore* store = &store_;
  return std::make_unique<pipeline::SessionRecorder>(
      std::move(session), [store, id](const std::string& line) {
        return store->Append(id, line);
      });
}

std::shared_ptr<Service::Entry> Service::Find(const std::string& id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(id);
  if (it != entries_.end()) return it->second;
  if (!store_.Exists(id)) return nullptr;
  absl::StatusOr<pipeline::Session> session = store_.Load(id);
  if (!session.ok()) return nullptr;
  auto entry = std::make_shared<Entry>();
  entry->committed = *session;
  entry->recorder = MakeRecorder(id, std::move(*session));
  entries_[id] = entry;
  return entry;
}

json Service::View(Entry& entry) {
  json view = pipeline::SnapshotView(entry.committed);
  if (entry.in_flight) view["status"] = "running";
  return view;
}

ApiResponse Service::CreateSession() {
  const std::string id = store_.NewId();
  absl::Status status = store_.CreateSessionDir(id);
  auto entry = std::make_shared<Entry>();
  entry->recorder = MakeRecorder(id, pipeline::Session{});
  if (status.ok()) status = entry->recorder->Emit("created", {{"id", id}});
  if (!status.ok()) return FromStatus(status);
  entry->committed = entry->recorder->session();
  {
    std::lock_guard<std::mutex> lock(mu_);
    entries_[id] = entry;
  }
  std::lock_guard<std::mutex> lock(entry->mu);
  return {201, json{{"id", id}, {"session", View(*entry)}}};
}

ApiResponse Service::Run(const std::shared_ptr<Entry>& entry, RunFn fn,
                         bool edit) {
  auto done = std::make_shared<std::promise<absl::StatusOr<std::string>>>();
  std::future<absl::StatusOr<std::string>> result = done->get_future();
  {
    std::unique_lock<std::mutex> lock(entry->mu);
    if (entry->in_flight) return Busy();
    if (entry->worker.joinable()) entry->worker.join();
    entry->in_flight = true;
    const std::string id = entry->committed.id;
    entry->worker = std::thread([this, entry, id, fn = std::move(fn), done] {
      absl::StatusOr<std::string> reply = [&]() -> absl::StatusOr<std::string> {
        MW_ASSIGN_OR_RETURN(pipeline::FileContents files, store_.LoadFiles(id));
        return fn(*entry->recorder, files, &entry->transcript);
      }();
      {
        std::lock_guard<std::mutex> lock(entry->mu);
        entry->committed = entry->recorder->session();
        entry->in_flight = false;
      }
      entry->idle.notify_all();
      done->set_value(std::move(reply));
    });
  }
  const auto budget = std::chrono::duration<double>(config_.reply_budget_seconds);
  if (result.wait_for(budget) != std::future_status::ready) {
    std::lock_guard<std::mutex> lock(entry->mu);
    return {202, json{{"reply", nullptr}, {"session", View(*entry)}}};
  }
  absl::StatusOr<std::string> reply = result.get();
  std::lock_guard<std::mutex> lock(entry->mu);
  if (reply.ok()) {
    return {200, json{{"reply", *reply}, {"session", View(*entry)}}};
  }
  ApiResponse error = FromStatus(reply.status());
  if (edit && error.status == 422) {
    json diagnostics = json::array();
    for (const lang::Diagnostic& d : entry->committed.diagnostics) {
      diagnostics.push_back(pipeline::ToJson(d));
    }
    error.body["diagnostics"] = diagnostics;
  }
  error.body["session"] = View(*entry);
  return error;
}

ApiResponse Service::PostMessage(const std::string& id,
                                 const std::string& body) {
  std::shared_ptr<Entry> entry = Find(id);
  if (entry == nullptr) return UnknownSession(id);
  std::optional<json> doc = ParseBody(body);
  if (!doc || !doc->contains("text") || !(*doc)["text"].is_string()) {
    return BadBody("expected {\"text\": string}");
  }
  const std::string text = (*doc)["text"].get<std::string>();
  if (Trim(text).empty()) return BadBody("text must not be empty");
  return Run(entry, [this, text](pipeline::SessionRecorder& r,
                                 const pipeline::FileContents& files,
                                 llm::Transcript* t) {
    return pipeline_.PostMessage(r, text, files, t);
  });
}

ApiResponse Service::EditArtifact(const std::string& id,
                                  const std::string& stage_name,
                                  const std::string& body) {
  std::shared_ptr<Entry> entry = Find(id);
  if (entry == nullptr) return UnknownSession(id);
  std::optional<pipeline::Stage> stage = pipeline::ParseStage(stage_name);
  if (!stage) {
    return ErrorResponse(404, "NotFound",
                         absl::StrCat("no artifact stage '", stage_name,
                                      "'; use description, formulation or code"));
  }
  std::optional<json> doc = ParseBody(body);
  if (!doc || !doc->contains("content")) {
    return BadBody("expected {\"content\": ...}");
  }
  const json& content_doc = (*doc)["content"];
  std::string content;
  if (content_doc.is_string()) {
    content = content_doc.get<std::string>();
  } else if (content_doc.is_object() && *stage == pipeline::Stage::kFormulation) {
    content = content_doc.dump();
  } else {
    return BadBody("content must be a string");
  }
  return Run(
      entry,
      [this, stage, content](pipeline::SessionRecorder& r,
                             const pipeline::FileContents& files,
                             llm::Transcript* t) {
        return pipeline_.EditArtifact(r, *stage, content, files, t);
      },
      /*edit=*/true);
}

ApiResponse Service::UploadFile(const std::string& id,
                                const std::string& filename,
                                const std::string& bytes) {
  std::shared_ptr<Entry> entry = Find(id);
  if (entry == nullptr) return UnknownSession(id);
  const std::string lower = ToLower(filename);
  if (!EndsWith(lower, ".csv") && !EndsWith(lower, ".json")) {
    return ErrorResponse(415, "UnsupportedMediaType",
                         "only .csv and .json data files are accepted");
  }
  if (!IsSafeFileName(filename)) {
    return BadBody("file names may use letters, digits, '.', '_' and '-'");
  }
  if (bytes.size() > config_.max_upload_bytes) {
    return ErrorResponse(413, "PayloadTooLarge",
                         absl::StrCat("file exceeds ", config_.max_upload_bytes,
                                      " bytes"));
  }
  std::lock_guard<std::mutex> lock(entry->mu);
  if (entry->in_flight) return Busy();
  absl::Status status = store_.SaveFile(id, filename, bytes);
  if (status.ok()) {
    status = entry->recorder->Emit(
        "file", {{"name", filename}, {"size", std::uint64_t{bytes.size()}}});
  }
  if (!status.ok()) return FromStatus(status);
  entry->committed = entry->recorder->session();
  return {201,
          json{{"file", {{"name", filename}, {"size", bytes.size()}}},
               {"session", View(*entry)}}};
}

ApiResponse Service::GetSession(const std::string& id) {
  std::shared_ptr<Entry> entry = Find(id);
  if (entry == nullptr) return UnknownSession(id);
  std::lock_guard<std::mutex> lock(entry->mu);
  return {200, json{{"session", View(*entry)}}};
}

ApiResponse Service::Solve(const std::string& id) {
  std::shared_ptr<Entry> entry = Find(id);
  if (entry == nullptr) return UnknownSession(id);
  return Run(entry, [this](pipeline::SessionRecorder& r,
                           const pipeline::FileContents& files,
                           llm::Transcript* t) {
    return pipeline_.Solve(r, files, t);
  });
}

ApiResponse Service::SetVisibility(const std::string& id,
                                   const std::string& body) {
  std::shared_ptr<Entry> entry = Find(id);
  if (entry == nullptr) return UnknownSession(id);
  std::optional<json> doc = ParseBody(body);
  if (!doc) return BadBody("expected a JSON object");
  json payload = json::object();
  for (const char* key : {"show_formulas", "show_code"}) {
    if (!doc->contains(key)) continue;
    if (!(*doc)[key].is_boolean()) {
      return BadBody(absl::StrCat(key, " must be a boolean"));
    }
    payload[key] = (*doc)[key];
  }
  if (payload.empty()) return BadBody("set show_formulas and/or show_code");
  std::lock_guard<std::mutex> lock(entry->mu);
  if (entry->in_flight) return Busy();
  absl::Status status = entry->recorder->Emit("visibility", payload);
  if (!status.ok()) return FromStatus(status);
  entry->committed = entry->recorder->session();
  return {200, json{{"session", View(*entry)}}};
}

absl::StatusOr<std::string> Service::FullState(const std::string& id) {
  std::shared_ptr<Entry> entry = Find(id);
  if (entry == nullptr) {
    return MakeError(ErrorKind::kPrecondition, "unknown session " + id);
  }
  std::lock_guard<std::mutex> lock(entry->mu);
  return pipeline::ToJson(entry->committed).dump();
}

void Service::WaitIdle(const std::string& id) {
  std::shared_ptr<Entry> entry = Find(id);
  if (entry == nullptr) return;
  std::unique_lock<std::mutex> lock(entry->mu);
  entry->idle.wait(lock, [&] { return !entry->in_flight; });
}

std::vector<llm::TranscriptEntry> Service::SessionTranscript(
    const std::string& id) {
  std::shared_ptr<Entry> entry = Find(id);
  if (entry == nullptr) return {};
  return entry->transcript.Entries();
}

}  // namespace modelwright::service
