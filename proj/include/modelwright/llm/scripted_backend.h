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

#ifndef MODELWRIGHT_LLM_SCRIPTED_BACKEND_H_
#define MODELWRIGHT_LLM_SCRIPTED_BACKEND_H_

#include <map>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "modelwright/llm/backend.h"

namespace modelwright::llm {

// 16 lowercase hex digits: FNV-1a 64 of the text after collapsing whitespace
// runs to one space, trimming, and ASCII-lowercasing.
std::string FixtureKey(std::string_view text);

// Replays canned replies keyed by FixtureKey(last user message).
class ScriptedBackend : public Backend {
 public:
  ScriptedBackend() = default;
  explicit ScriptedBackend(std::map<std::string, std::string> fixtures)
      : fixtures_(std::move(fixtures)) {}

  // Reads a JSON object {key: reply}. Non-string replies are stored as
  // their compact JSON text.
  static absl::StatusOr<std::unique_ptr<ScriptedBackend>> FromFile(
      const std::string& path);

  // Maps `prompt` (hashed) to `reply`. Not for use while calls are in flight.
  void Add(std::string_view prompt, std::string reply);

  const std::map<std::string, std::string>& fixtures() const {
    return fixtures_;
  }
  std::string Name() const override { return "scripted"; }

 protected:
  absl::StatusOr<std::string> DoComplete(
      const std::vector<ChatMessage>& messages) override;

 private:
  std::map<std::string, std::string> fixtures_;
};

}  // namespace modelwright::llm

#endif  // MODELWRIGHT_LLM_SCRIPTED_BACKEND_H_
