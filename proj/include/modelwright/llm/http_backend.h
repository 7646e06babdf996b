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

#ifndef MODELWRIGHT_LLM_HTTP_BACKEND_H_
#define MODELWRIGHT_LLM_HTTP_BACKEND_H_

#include <string>

#include "modelwright/llm/backend.h"

namespace modelwright::llm {

// OpenAI-compatible chat-completions client. Connection failures, 429 and
// 5xx responses are retried up to max_retries times with exponential
// backoff; they end in BackendUnavailable or Timeout.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(BackendConfig config) : config_(std::move(config)) {}

  std::string Name() const override { return "http"; }

  static nlohmann::json RequestBody(const BackendConfig& config,
                                    const std::vector<ChatMessage>& messages);

 protected:
  absl::StatusOr<std::string> DoComplete(
      const std::vector<ChatMessage>& messages) override;

 private:
  BackendConfig config_;
};

}  // namespace modelwright::llm

#endif  // MODELWRIGHT_LLM_HTTP_BACKEND_H_
