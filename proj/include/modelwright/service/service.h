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


#ifndef MODELWRIGHT_SERVICE_SERVICE_H_
#define MODELWRIGHT_SERVICE_SERVICE_H_

#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "modelwright/llm/backend.h"
#include "modelwright/pipeline/pipeline.h"
#include "modelwright/service/config.h"
#include "modelwright/service/store.h"

namespace modelwright::service {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// The API behind the HTTP routes, independent of the transport. Safe to call
// from many threads. Runs for one session are serialized: a request that
// would start a second run while one is in flight gets 409.
//
// A run that finishes within the reply budget answers synchronously. A
// slower one keeps going in the background and the request returns 202
// with the session reported as "running"; clients poll GetSession.
class Service {
 public:
  // Prepares the data directory. Errors: StorageFailure.
  static absl::StatusOr<std::unique_ptr<Service>> Create(
      ServiceConfig config, llm::Backend& backend);

  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  ApiResponse CreateSession();
  // Body: {"text": string}.
  ApiResponse PostMessage(const std::string& id, const std::string& body);
  // Body: {"content": string}; a formulation may also be given as a JSON
  // object.
  ApiResponse EditArtifact(const std::string& id, const std::string& stage,
                           const std::string& body);
  ApiResponse UploadFile(const std::string& id, const std::string& filename,
                         const std::string& bytes);
  ApiResponse GetSession(const std::string& id);
  ApiResponse Solve(const std::string& id);
  // Body: {"show_formulas"?: bool, "show_code"?: bool}.
  ApiResponse SetVisibility(const std::string& id, const std::string& body);

  // Full server-side state (hidden artifacts included) as committed by the
  // last finished run. Errors: Precondition for unknown ids.
  absl::StatusOr<std::string> FullState(const std::string& id);
  // Blocks until no run is in flight for `id`.
  void WaitIdle(const std::string& id);
  // Prompts sent for `id` since this process loaded it.
  std::vector<llm::TranscriptEntry> SessionTranscript(const std::string& id);

  const ServiceConfig& config() const { return config_; }

 private:
  struct Entry {
    std::mutex mu;
    std::condition_variable idle;
    bool in_flight = false;
    pipeline::Session committed;
    std::unique_ptr<pipeline::SessionRecorder> recorder;
    llm::Transcript transcript;
    std::thread worker;
  };

  using RunFn = std::function<absl::StatusOr<std::string>(
      pipeline::SessionRecorder&, const pipeline::FileContents&,
      llm::Transcript*)>;

  Service(ServiceConfig config, llm::Backend& backend);

  std::shared_ptr<Entry> Find(const std::string& id);
  std::unique_ptr<pipeline::SessionRecorder> MakeRecorder(
      const std::string& id, pipeline::Session session);
  // Starts `fn` unless a run is in flight and waits up to the reply budget.
  ApiResponse Run(const std::shared_ptr<Entry>& entry, RunFn fn,
                  bool edit = false);
  nlohmann::json View(Entry& entry);

  ServiceConfig config_;
  SessionStore store_;
  pipeline::Pipeline pipeline_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> entries_;
};

// Error body: {"error": {"kind": ..., "message": ...}}.
ApiResponse ErrorResponse(int status, const std::string& kind,
                          const std::string& message);

}  // namespace modelwright::service

#endif  // MODELWRIGHT_SERVICE_SERVICE_H_
