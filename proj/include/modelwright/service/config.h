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


#ifndef MODELWRIGHT_SERVICE_CONFIG_H_
#define MODELWRIGHT_SERVICE_CONFIG_H_

#include <cstdint>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "modelwright/ir/canonical.h"
#include "modelwright/llm/backend.h"
#include "modelwright/pipeline/pipeline.h"

namespace modelwright::service {

// Loaded from a `key = value` file. Lines starting with '#' and blank lines
// are ignored. See README for the full key list.
struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir = "./modelwright-data";
  llm::BackendConfig backend;
  pipeline::PipelineOptions pipeline;
  EquivalenceMode equivalence_mode = EquivalenceMode::kStrict;
  std::uint64_t max_upload_bytes = 1 << 20;
  double reply_budget_seconds = 30;
};

// Errors: Config (unknown key, duplicate key, bad value, line without '=').
absl::StatusOr<ServiceConfig> ParseConfig(const std::string& text);

// Errors: MissingFile, plus those of ParseConfig.
absl::StatusOr<ServiceConfig> LoadConfig(const std::string& path);

// Creates data_dir/sessions and proves it writable with a probe file.
// Errors: StorageFailure.
absl::Status PrepareDataDir(const std::string& data_dir);

}  // namespace modelwright::service

#endif  // MODELWRIGHT_SERVICE_CONFIG_H_
