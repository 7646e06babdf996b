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

#ifndef MODELWRIGHT_PIPELINE_SESSION_H_
#define MODELWRIGHT_PIPELINE_SESSION_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "modelwright/ir/problem.h"
#include "modelwright/lang/source.h"
#include "modelwright/pipeline/stages.h"
#include "modelwright/solver/solver.h"

namespace modelwright::pipeline {

enum class SessionStatus { kGathering, kReady, kSolved, kFailed };

const char* SessionStatusName(SessionStatus status);
std::optional<SessionStatus> ParseSessionStatus(const std::string& text);

enum class Stage { kDescription, kFormulation, kCode };

const char* StageName(Stage stage);
std::optional<Stage> ParseStage(const std::string& text);

struct Turn {
  std::string user;
  std::string reply;
  bool operator==(const Turn&) const = default;
};

struct Artifacts {
  std::string description;
  std::optional<ProblemIR> formulation;
  std::optional<lang::SourceFile> code;
  std::optional<solver::SolveResult> solve_result;
  std::optional<std::string> interpretation;
};

struct Visibility {
  bool show_formulas = true;
  bool show_code = true;
};

struct StoredFile {
  std::string name;
  std::uint64_t size = 0;
};

struct Session {
  std::string id;
  std::vector<Turn> turns;
  Artifacts artifacts;
  SessionStatus status = SessionStatus::kGathering;
  Visibility visibility;
  std::optional<CompletenessReport> completeness;
  Requirements requirements;
  // Grammar or validation findings for the staged code or a rejected edit.
  std::vector<lang::Diagnostic> diagnostics;
  std::vector<SensefulViolation> senseful;
  // Attempt trail of the last failed formulation.
  std::vector<Attempt> failed_attempts;
  std::vector<StoredFile> files;
  std::string last_reply;
  std::string last_error;
  std::int64_t last_seq = 0;
};

nlohmann::json ToJson(const lang::Diagnostic& diagnostic);
lang::Diagnostic DiagnosticFromJson(const nlohmann::json& doc);
nlohmann::json ToJson(const solver::SolveResult& result);
solver::SolveResult SolveResultFromJson(const nlohmann::json& doc);

// Full state, hidden artifacts included. Deterministic: equal sessions give
// byte-identical dumps.
nlohmann::json ToJson(const Session& session);

// Client view: hidden artifacts are left out of "visible".
nlohmann::json SnapshotView(const Session& session);

// Applies one logged event. Rejects events that would break staging order
// (code without formulation, solve without code, interpretation without a
// solve result) or that arrive out of sequence. Upstream artifact events
// clear everything downstream.
absl::Status Apply(Session& session, const nlohmann::json& event);

// Folds a whole event log. Errors: StorageFailure on a malformed line.
absl::StatusOr<Session> Replay(const std::vector<std::string>& lines);

// Writes events through `sink` (one JSON line per event) and applies the
// re-parsed line, so the live state always equals the replayed one.
class SessionRecorder {
 public:
  using Sink = std::function<absl::Status(const std::string& line)>;

  SessionRecorder(Session session, Sink sink)
      : session_(std::move(session)), sink_(std::move(sink)) {}

  const Session& session() const { return session_; }

  absl::Status Emit(const std::string& type, nlohmann::json payload = {});

 private:
  Session session_;
  Sink sink_;
};

}  // namespace modelwright::pipeline

#endif  // MODELWRIGHT_PIPELINE_SESSION_H_
