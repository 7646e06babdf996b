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

#ifndef MODELWRIGHT_LLM_BACKEND_H_
#define MODELWRIGHT_LLM_BACKEND_H_

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"

namespace modelwright::llm {

enum class Role { kSystem, kUser, kAssistant };

const char* RoleName(Role role);
std::optional<Role> ParseRole(std::string_view text);

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

enum class BackendKind { kHttp, kScripted };

struct BackendConfig {
  BackendKind kind = BackendKind::kScripted;
  // http: full chat-completions URL, e.g. http://127.0.0.1:8000/v1/chat/completions
  std::string endpoint;
  std::string model;
  // Name of the environment variable holding the bearer token; the token
  // itself never appears in configuration.
  std::string api_key_env;
  // scripted: JSON map from FixtureKey() to reply text.
  std::string fixture_path;
  double timeout_seconds = 60;
  int max_retries = 2;
  double initial_backoff_seconds = 0.5;
  double temperature = 0;
};

struct TranscriptEntry {
  std::string backend;
  std::vector<ChatMessage> prompt;
  // Reply text, or the error message when the call failed.
  std::string reply;
  bool ok = false;
};

// Append-only log of every prompt sent to a backend. Thread-safe.
class Transcript {
 public:
  void Append(TranscriptEntry entry);
  std::vector<TranscriptEntry> Entries() const;
  std::size_t size() const;
  // True if `needle` occurs in any prompt message.
  bool PromptsContain(std::string_view needle) const;
  // One JSON object per line.
  std::string ToJsonl() const;

 private:
  mutable std::mutex mu_;
  std::vector<TranscriptEntry> entries_;
};

nlohmann::json ToJson(const TranscriptEntry& entry);

// A chat-completion backend. Complete() checks the message list, delegates
// to the implementation, and logs the exchange to the backend's own
// transcript and to `session` when given.
class Backend {
 public:
  virtual ~Backend() = default;

  absl::StatusOr<ChatMessage> Complete(const std::vector<ChatMessage>& messages,
                                       Transcript* session = nullptr);

  virtual std::string Name() const = 0;
  const Transcript& transcript() const { return transcript_; }

 protected:
  virtual absl::StatusOr<std::string> DoComplete(
      const std::vector<ChatMessage>& messages) = 0;

 private:
  Transcript transcript_;
};

absl::StatusOr<std::unique_ptr<Backend>> CreateBackend(
    const BackendConfig& config);

}  // namespace modelwright::llm

#endif  // MODELWRIGHT_LLM_BACKEND_H_
