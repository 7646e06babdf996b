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

#include "modelwright/llm/scripted_backend.h"

#include <cstdint>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "modelwright/common/status.h"
#include "modelwright/common/strings.h"

namespace modelwright::llm {

std::string FixtureKey(std::string_view text) {
  const std::string normalized = ToLower(NormalizeWhitespace(text));
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : normalized) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return absl::StrFormat("%016x", hash);
}

absl::StatusOr<std::unique_ptr<ScriptedBackend>> ScriptedBackend::FromFile(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(ErrorKind::kMissingFile,
                     absl::StrCat("cannot open fixture file ", path));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json doc = nlohmann::json::parse(buffer.str(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    return MakeError(ErrorKind::kConfig,
                     absl::StrCat("fixture file ", path,
                                  " is not a JSON object"));
  }
  std::map<std::string, std::string> fixtures;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    fixtures[it.key()] =
        it.value().is_string() ? it.value().get<std::string>()
                               : it.value().dump();
  }
  return std::make_unique<ScriptedBackend>(std::move(fixtures));
}

void ScriptedBackend::Add(std::string_view prompt, std::string reply) {
  fixtures_[FixtureKey(prompt)] = std::move(reply);
}

absl::StatusOr<std::string> ScriptedBackend::DoComplete(
    const std::vector<ChatMessage>& messages) {
  const std::string key = FixtureKey(messages.back().content);
  auto it = fixtures_.find(key);
  if (it == fixtures_.end()) {
    return MakeError(ErrorKind::kFixtureMiss,
                     absl::StrCat("no fixture for key ", key));
  }
  return it->second;
}

}  // namespace modelwright::llm
