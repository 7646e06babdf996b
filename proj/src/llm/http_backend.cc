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

#include "modelwright/llm/http_backend.h"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "absl/strings/str_cat.h"
#include "httplib.h"
#include "modelwright/common/status.h"

namespace modelwright::llm {
namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

absl::StatusOr<Endpoint> SplitUrl(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    return MakeError(ErrorKind::kConfig,
                     absl::StrCat("endpoint '", url, "' has no scheme"));
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    return MakeError(ErrorKind::kConfig,
                     absl::StrCat("unsupported scheme '", scheme, "'"));
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return Endpoint{url, "/"};
  return Endpoint{url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

nlohmann::json HttpBackend::RequestBody(
    const BackendConfig& config, const std::vector<ChatMessage>& messages) {
  nlohmann::json list = nlohmann::json::array();
  for (const ChatMessage& m : messages) {
    list.push_back({{"role", RoleName(m.role)}, {"content", m.content}});
  }
  return {{"model", config.model},
          {"messages", list},
          {"temperature", config.temperature}};
}

absl::StatusOr<std::string> HttpBackend::DoComplete(
    const std::vector<ChatMessage>& messages) {
  MW_ASSIGN_OR_RETURN(Endpoint endpoint, SplitUrl(config_.endpoint));
  httplib::Headers headers;
  if (!config_.api_key_env.empty()) {
    const char* token = std::getenv(config_.api_key_env.c_str());
    if (token != nullptr && *token != '\0') {
      headers.emplace("Authorization", absl::StrCat("Bearer ", token));
    }
  }
  const std::string body = RequestBody(config_, messages).dump();
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(config_.timeout_seconds));

  absl::Status last;
  double backoff = config_.initial_backoff_seconds;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
      backoff *= 2;
    }
    httplib::Client client(endpoint.origin);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    const auto start = std::chrono::steady_clock::now();
    httplib::Result result =
        client.Post(endpoint.path, headers, body, "application/json");
    const double elapsed = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    if (!result) {
      const httplib::Error error = result.error();
      const bool timed_out =
          error == httplib::Error::ConnectionTimeout ||
          ((error == httplib::Error::Read || error == httplib::Error::Write) &&
           elapsed >= 0.9 * config_.timeout_seconds);
      last = MakeError(
          timed_out ? ErrorKind::kTimeout : ErrorKind::kBackendUnavailable,
          absl::StrCat(config_.endpoint, ": ", httplib::to_string(error),
                       " after ", attempt + 1, " attempt(s)"));
      continue;
    }
    if (result->status == 429 || result->status >= 500) {
      last = MakeError(ErrorKind::kBackendUnavailable,
                       absl::StrCat(config_.endpoint, ": HTTP ",
                                    result->status, " after ", attempt + 1,
                                    " attempt(s)"));
      continue;
    }
    if (result->status != 200) {
      return MakeError(ErrorKind::kBackendUnavailable,
                       absl::StrCat(config_.endpoint, ": HTTP ",
                                    result->status));
    }
    nlohmann::json reply = nlohmann::json::parse(result->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("choices") ||
        !reply["choices"].is_array() || reply["choices"].empty() ||
        !reply["choices"][0].contains("message") ||
        !reply["choices"][0]["message"].contains("content") ||
        !reply["choices"][0]["message"]["content"].is_string()) {
      return MakeError(ErrorKind::kMalformedModelOutput,
                       "chat-completions reply lacks choices[0].message."
                       "content");
    }
    return reply["choices"][0]["message"]["content"].get<std::string>();
  }
  return last;
}

}  // namespace modelwright::llm
