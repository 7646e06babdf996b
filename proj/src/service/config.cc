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


#include "modelwright/service/config.h"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "modelwright/common/status.h"
#include "modelwright/common/strings.h"

namespace modelwright::service {
namespace {

using Setter = std::function<bool(ServiceConfig&, const std::string&)>;

bool ToDouble(const std::string& text, double& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

template <typename Int>
bool ToInt(const std::string& text, Int& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

Setter Positive(double ServiceConfig::*field) {
  return [field](ServiceConfig& c, const std::string& v) {
    double d;
    if (!ToDouble(v, d) || d <= 0) return false;
    c.*field = d;
    return true;
  };
}

const std::map<std::string, Setter>& Setters() {
  static const auto* setters = new std::map<std::string, Setter>{
      {"listen",
       [](ServiceConfig& c, const std::string& v) {
         const std::size_t colon = v.rfind(':');
         if (colon == std::string::npos || colon == 0) return false;
         int port;
         if (!ToInt(v.substr(colon + 1), port) || port < 0 || port > 65535) {
           return false;
         }
         c.host = v.substr(0, colon);
         c.port = port;
         return true;
       }},
      {"data_dir",
       [](ServiceConfig& c, const std::string& v) {
         c.data_dir = v;
         return !v.empty();
       }},
      {"max_upload_bytes",
       [](ServiceConfig& c, const std::string& v) {
         return ToInt(v, c.max_upload_bytes) && c.max_upload_bytes > 0;
       }},
      {"reply_budget_seconds", Positive(&ServiceConfig::reply_budget_seconds)},
      {"equivalence_mode",
       [](ServiceConfig& c, const std::string& v) {
         std::optional<EquivalenceMode> mode = ParseEquivalenceMode(v);
         if (mode) c.equivalence_mode = *mode;
         return mode.has_value();
       }},
      {"backend",
       [](ServiceConfig& c, const std::string& v) {
         if (v == "http") c.backend.kind = llm::BackendKind::kHttp;
         else if (v == "scripted") c.backend.kind = llm::BackendKind::kScripted;
         else return false;
         return true;
       }},
      {"backend.endpoint",
       [](ServiceConfig& c, const std::string& v) {
         c.backend.endpoint = v;
         return true;
       }},
      {"backend.model",
       [](ServiceConfig& c, const std::string& v) {
         c.backend.model = v;
         return true;
       }},
      {"backend.api_key_env",
       [](ServiceConfig& c, const std::string& v) {
         c.backend.api_key_env = v;
         return true;
       }},
      {"backend.fixtures",
       [](ServiceConfig& c, const std::string& v) {
         c.backend.fixture_path = v;
         return true;
       }},
      {"backend.timeout_seconds",
       [](ServiceConfig& c, const std::string& v) {
         return ToDouble(v, c.backend.timeout_seconds) &&
                c.backend.timeout_seconds > 0;
       }},
      {"backend.max_retries",
       [](ServiceConfig& c, const std::string& v) {
         return ToInt(v, c.backend.max_retries) && c.backend.max_retries >= 0;
       }},
      {"backend.temperature",
       [](ServiceConfig& c, const std::string& v) {
         return ToDouble(v, c.backend.temperature) &&
                c.backend.temperature >= 0;
       }},
      {"pipeline.max_retries",
       [](ServiceConfig& c, const std::string& v) {
         return ToInt(v, c.pipeline.max_retries) &&
                c.pipeline.max_retries >= 0;
       }},
      {"pipeline.interpret_mode",
       [](ServiceConfig& c, const std::string& v) {
         if (v == "template") {
           c.pipeline.interpret_mode = pipeline::InterpretMode::kTemplate;
         } else if (v == "model") {
           c.pipeline.interpret_mode = pipeline::InterpretMode::kModel;
         } else {
           return false;
         }
         return true;
       }},
      {"solver.feasibility_tolerance",
       [](ServiceConfig& c, const std::string& v) {
         return ToDouble(v, c.pipeline.solver.feasibility_tolerance) &&
                c.pipeline.solver.feasibility_tolerance > 0;
       }},
      {"solver.integrality_tolerance",
       [](ServiceConfig& c, const std::string& v) {
         return ToDouble(v, c.pipeline.solver.integrality_tolerance) &&
                c.pipeline.solver.integrality_tolerance > 0;
       }},
      {"solver.strict_epsilon",
       [](ServiceConfig& c, const std::string& v) {
         std::optional<Rational> eps = ParseRational(v);
         if (!eps || *eps <= 0) return false;
         c.pipeline.solver.strict_epsilon = *eps;
         return true;
       }},
      {"solver.iteration_limit",
       [](ServiceConfig& c, const std::string& v) {
         return ToInt(v, c.pipeline.solver.iteration_limit) &&
                c.pipeline.solver.iteration_limit > 0;
       }},
      {"solver.node_limit",
       [](ServiceConfig& c, const std::string& v) {
         return ToInt(v, c.pipeline.solver.node_limit) &&
                c.pipeline.solver.node_limit > 0;
       }},
  };
  return *setters;
}

}  // namespace

absl::StatusOr<ServiceConfig> ParseConfig(const std::string& text) {
  ServiceConfig config;
  std::set<std::string> seen;
  int number = 0;
  for (const std::string& raw : SplitLines(text)) {
    ++number;
    const std::string line = Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      return MakeError(ErrorKind::kConfig,
                       absl::StrCat("line ", number, ": expected key = value"));
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    auto it = Setters().find(key);
    if (it == Setters().end()) {
      return MakeError(ErrorKind::kConfig, absl::StrCat("line ", number,
                                                        ": unknown key '",
                                                        key, "'"));
    }
    if (!seen.insert(key).second) {
      return MakeError(ErrorKind::kConfig, absl::StrCat("line ", number,
                                                        ": duplicate key '",
                                                        key, "'"));
    }
    if (!it->second(config, value)) {
      return MakeError(ErrorKind::kConfig,
                       absl::StrCat("line ", number, ": bad value '", value,
                                    "' for ", key));
    }
  }
  if (config.backend.kind == llm::BackendKind::kHttp &&
      config.backend.endpoint.empty()) {
    return MakeError(ErrorKind::kConfig,
                     "backend = http needs backend.endpoint");
  }
  if (config.backend.kind == llm::BackendKind::kScripted &&
      config.backend.fixture_path.empty()) {
    return MakeError(ErrorKind::kConfig,
                     "backend = scripted needs backend.fixtures");
  }
  return config;
}

absl::StatusOr<ServiceConfig> LoadConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(ErrorKind::kMissingFile,
                     absl::StrCat("cannot read config file ", path));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

absl::Status PrepareDataDir(const std::string& data_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const fs::path sessions = fs::path(data_dir) / "sessions";
  fs::create_directories(sessions, ec);
  if (ec) {
    return MakeError(ErrorKind::kStorageFailure,
                     absl::StrCat("cannot create ", sessions.string(), ": ",
                                  ec.message()));
  }
  const fs::path probe = sessions / ".write-probe";
  {
    std::ofstream out(probe, std::ios::binary | std::ios::trunc);
    out << "ok";
    if (!out.flush()) {
      return MakeError(ErrorKind::kStorageFailure,
                       absl::StrCat("data directory ", data_dir,
                                    " is not writable"));
    }
  }
  fs::remove(probe, ec);
  return absl::OkStatus();
}

}  // namespace modelwright::service
