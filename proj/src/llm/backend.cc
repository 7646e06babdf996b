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

#include "modelwright/llm/backend.h"

#include "absl/strings/str_cat.h"
#include "modelwright/common/status.h"
#include "modelwright/llm/http_backend.h"
#include "modelwright/llm/scripted_backend.h"

namespace modelwright::llm {

const char* RoleName(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "user";
}

std::optional<Role> ParseRole(std::string_view text) {
  if (text == "system") return Role::kSystem;
  if (text == "user") return Role::kUser;
  if (text == "assistant") return Role::kAssistant;
  return std::nullopt;
}

void Transcript::Append(TranscriptEntry entry) {
  std::lock_guard<std::mutex> lock(mu_);
  entries_.push_back(std::move(entry));
}

std::vector<TranscriptEntry> Transcript::Entries() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_;
}

std::size_t Transcript::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

bool Transcript::PromptsContain(std::string_view needle) const {
  std::lock_guard<std::mutex> lock(mu_);
  for (const TranscriptEntry& entry : entries_) {
    for (const ChatMessage& m : entry.prompt) {
      if (m.content.find(needle) != std::string::npos) return true;
    }
  }
  return false;
}

nlohmann::json ToJson(const TranscriptEntry& entry) {
  nlohmann::json prompt = nlohmann::json::array();
  for (const ChatMessage& m : entry.prompt) {
    prompt.push_back({{"role", RoleName(m.role)}, {"content", m.content}});
  }
  return {{"backend", entry.backend},
          {"prompt", prompt},
          {"reply", entry.reply},
          {"ok", entry.ok}};
}

std::string Transcript::ToJsonl() const {
  std::string out;
  for (const TranscriptEntry& entry : Entries()) {
    absl::StrAppend(&out, ToJson(entry).dump(), "\n");
  }
  return out;
}

absl::StatusOr<ChatMessage> Backend::Complete(
    const std::vector<ChatMessage>& messages, Transcript* session) {
  if (messages.empty() || messages.back().role != Role::kUser) {
    return MakeError(ErrorKind::kPrecondition,
                     "messages must be nonempty and end with a user message");
  }
  for (const ChatMessage& m : messages) {
    if (m.role != Role::kSystem && m.content.empty()) {
      return MakeError(ErrorKind::kPrecondition,
                       absl::StrCat("empty ", RoleName(m.role), " message"));
    }
  }
  absl::StatusOr<std::string> reply = DoComplete(messages);
  TranscriptEntry entry{Name(), messages,
                        reply.ok() ? *reply : std::string(reply.status().message()),
                        reply.ok()};
  if (session != nullptr) session->Append(entry);
  transcript_.Append(std::move(entry));
  if (!reply.ok()) return reply.status();
  return ChatMessage{Role::kAssistant, *std::move(reply)};
}

absl::StatusOr<std::unique_ptr<Backend>> CreateBackend(
    const BackendConfig& config) {
  if (config.kind == BackendKind::kScripted) {
    if (config.fixture_path.empty()) {
      return MakeError(ErrorKind::kConfig,
                       "scripted backend needs a fixture path");
    }
    MW_ASSIGN_OR_RETURN(std::unique_ptr<ScriptedBackend> backend,
                        ScriptedBackend::FromFile(config.fixture_path));
    return std::unique_ptr<Backend>(std::move(backend));
  }
  if (config.endpoint.empty() || config.model.empty()) {
    return MakeError(ErrorKind::kConfig,
                     "http backend needs an endpoint and a model name");
  }
  if (config.timeout_seconds <= 0 || config.max_retries < 0) {
    return MakeError(ErrorKind::kConfig,
                     "timeout must be positive and max_retries nonnegative");
  }
  return std::unique_ptr<Backend>(std::make_unique<HttpBackend>(config));
}

}  // namespace modelwright::llm
