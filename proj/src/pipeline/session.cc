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

#include "modelwright/pipeline/session.h"

#include "absl/strings/str_cat.h"
#include "modelwright/common/status.h"
#include "modelwright/ir/json_io.h"

namespace modelwright::pipeline {
namespace {

using nlohmann::json;

absl::Status Rejected(const std::string& message) {
  return MakeError(ErrorKind::kPrecondition, message);
}

void ClearFromCode(Session& s) {
  s.artifacts.code.reset();
  s.diagnostics.clear();
  s.artifacts.solve_result.reset();
  s.artifacts.interpretation.reset();
  s.senseful.clear();
}

void ClearFromFormulation(Session& s) {
  s.artifacts.formulation.reset();
  s.failed_attempts.clear();
  ClearFromCode(s);
}

json OptionalJson(const std::optional<std::string>& value) {
  return value.has_value() ? json(*value) : json();
}

template <typename T>
json JsonList(const std::vector<T>& items) {
  json out = json::array();
  for (const T& item : items) out.push_back(ToJson(item));
  return out;
}

json TurnsJson(const std::vector<Turn>& turns) {
  json out = json::array();
  for (const Turn& t : turns) out.push_back({{"user", t.user}, {"reply", t.reply}});
  return out;
}

json FilesJson(const std::vector<StoredFile>& files) {
  json out = json::array();
  for (const StoredFile& f : files) {
    out.push_back({{"name", f.name}, {"size", f.size}});
  }
  return out;
}

json CodeJson(const std::optional<lang::SourceFile>& code) {
  if (!code.has_value()) return json();
  return {{"text", code->text}, {"origin", lang::SourceOriginName(code->origin)}};
}

json ArtifactsJson(const Session& s, bool show_formulas, bool show_code) {
  json out = {{"description", s.artifacts.description}};
  if (show_formulas) {
    out["formulation"] = s.artifacts.formulation.has_value()
                             ? ToJson(*s.artifacts.formulation)
                             : json();
  }
  if (show_code) out["code"] = CodeJson(s.artifacts.code);
  out["solve_result"] = s.artifacts.solve_result.has_value()
                            ? ToJson(*s.artifacts.solve_result)
                            : json();
  out["interpretation"] = OptionalJson(s.artifacts.interpretation);
  return out;
}

json CommonJson(const Session& s) {
  return {{"id", s.id},
          {"status", SessionStatusName(s.status)},
          {"turns", TurnsJson(s.turns)},
          {"visibility",
           {{"show_formulas", s.visibility.show_formulas},
            {"show_code", s.visibility.show_code}}},
          {"completeness",
           s.completeness.has_value() ? ToJson(*s.completeness) : json()},
          {"requirements", ToJson(s.requirements)},
          {"diagnostics", JsonList(s.diagnostics)},
          {"senseful", JsonList(s.senseful)},
          {"failed_attempts", JsonList(s.failed_attempts)},
          {"files", FilesJson(s.files)},
          {"last_reply", s.last_reply},
          {"last_error", s.last_error},
          {"last_seq", s.last_seq}};
}

std::vector<lang::Diagnostic> DiagnosticsFromJson(const json& doc) {
  std::vector<lang::Diagnostic> out;
  if (!doc.is_array()) return out;
  for (const json& d : doc) out.push_back(DiagnosticFromJson(d));
  return out;
}

absl::Status ApplyEvent(Session& s, const std::string& type, const json& e) {
  if (type == "created") {
    s.id = e.value("id", "");
    return absl::OkStatus();
  }
  if (type == "user_message") {
    s.turns.push_back({e.value("text", ""), ""});
    s.last_error.clear();
    return absl::OkStatus();
  }
  if (type == "reply") {
    s.last_reply = e.value("text", "");
    if (e.value("turn", false)) {
      if (s.turns.empty()) return Rejected("reply without a user turn");
      s.turns.back().reply = s.last_reply;
    }
    return absl::OkStatus();
  }
  if (type == "description") {
    s.artifacts.description = e.value("text", "");
    ClearFromFormulation(s);
    s.completeness.reset();
    s.requirements = Requirements();
    s.last_error.clear();
    return absl::OkStatus();
  }
  if (type == "completeness") {
    s.completeness = CompletenessFromJson(e.value("report", json::object()));
    return absl::OkStatus();
  }
  if (type == "formulation") {
    absl::StatusOr<ProblemIR> ir = ProblemFromJson(e.value("ir", json()));
    if (!ir.ok()) return Rejected(std::string(ir.status().message()));
    ClearFromFormulation(s);
    s.artifacts.formulation = *std::move(ir);
    s.requirements = RequirementsFromJson(e.value("requirements", json()));
    s.last_error.clear();
    return absl::OkStatus();
  }
  if (type == "formulation_failed") {
    ClearFromFormulation(s);
    for (const json& a : e.value("attempts", json::array())) {
      s.failed_attempts.push_back({a.value("reply", ""),
                                   a.value("error_kind", ""),
                                   a.value("diagnostics", "")});
    }
    return absl::OkStatus();
  }
  if (type == "code") {
    if (!s.artifacts.formulation.has_value()) {
      return Rejected("code staged before a formulation");
    }
    ClearFromCode(s);
    lang::SourceFile code;
    code.text = e.value("text", "");
    code.origin = e.value("origin", "") == "user-edited"
                      ? lang::SourceOrigin::kUserEdited
                      : lang::SourceOrigin::kGenerated;
    s.artifacts.code = std::move(code);
    s.diagnostics = DiagnosticsFromJson(e.value("diagnostics", json()));
    s.last_error.clear();
    return absl::OkStatus();
  }
  if (type == "edit_rejected") {
    s.diagnostics = DiagnosticsFromJson(e.value("diagnostics", json()));
    return absl::OkStatus();
  }
  if (type == "solve") {
    if (!s.artifacts.code.has_value()) {
      return Rejected("solve result staged before code");
    }
    s.artifacts.solve_result = SolveResultFromJson(e.value("result", json()));
    s.artifacts.interpretation.reset();
    s.senseful.clear();
    return absl::OkStatus();
  }
  if (type == "senseful") {
    if (!s.artifacts.solve_result.has_value()) {
      return Rejected("senseful check before a solve result");
    }
    s.senseful.clear();
    for (const json& v : e.value("violations", json::array())) {
      if (auto parsed = SensefulFromJson(v)) s.senseful.push_back(*parsed);
    }
    return absl::OkStatus();
  }
  if (type == "interpretation") {
    if (!s.artifacts.solve_result.has_value()) {
      return Rejected("interpretation staged before a solve result");
    }
    s.artifacts.interpretation = e.value("text", "");
    return absl::OkStatus();
  }
  if (type == "status") {
    std::optional<SessionStatus> status =
        ParseSessionStatus(e.value("status", ""));
    if (!status.has_value()) return Rejected("unknown status");
    s.status = *status;
    return absl::OkStatus();
  }
  if (type == "visibility") {
    s.visibility.show_formulas =
        e.value("show_formulas", s.visibility.show_formulas);
    s.visibility.show_code = e.value("show_code", s.visibility.show_code);
    return absl::OkStatus();
  }
  if (type == "file") {
    StoredFile file{e.value("name", ""), e.value("size", std::uint64_t{0})};
    for (StoredFile& existing : s.files) {
      if (existing.name == file.name) {
        existing = file;
        return absl::OkStatus();
      }
    }
    s.files.push_back(file);
    return absl::OkStatus();
  }
  if (type == "error") {
    s.last_error = e.value("message", "");
    return absl::OkStatus();
  }
  return Rejected(absl::StrCat("unknown event type '", type, "'"));
}

}  // namespace

const char* SessionStatusName(SessionStatus status) {
  switch (status) {
    case SessionStatus::kGathering: return "gathering";
    case SessionStatus::kReady: return "ready";
    case SessionStatus::kSolved: return "solved";
    case SessionStatus::kFailed: return "failed";
  }
  return "failed";
}

std::optional<SessionStatus> ParseSessionStatus(const std::string& text) {
  for (SessionStatus s : {SessionStatus::kGathering, SessionStatus::kReady,
                          SessionStatus::kSolved, SessionStatus::kFailed}) {
    if (text == SessionStatusName(s)) return s;
  }
  return std::nullopt;
}

const char* StageName(Stage stage) {
  switch (stage) {
    case Stage::kDescription: return "description";
    case Stage::kFormulation: return "formulation";
    case Stage::kCode: return "code";
  }
  return "description";
}

std::optional<Stage> ParseStage(const std::string& text) {
  for (Stage s : {Stage::kDescription, Stage::kFormulation, Stage::kCode}) {
    if (text == StageName(s)) return s;
  }
  return std::nullopt;
}

json ToJson(const lang::Diagnostic& d) {
  json out = {{"severity", d.severity == lang::Severity::kError ? "error"
                                                                 : "warning"},
              {"message", d.message},
              {"line", d.span.line},
              {"column", d.span.column},
              {"length", d.span.length},
              {"text", lang::FormatDiagnostic(d)}};
  out["suggestion"] = OptionalJson(d.suggestion);
  return out;
}

lang::Diagnostic DiagnosticFromJson(const json& doc) {
  lang::Diagnostic d;
  d.severity = doc.value("severity", "error") == "warning"
                   ? lang::Severity::kWarning
                   : lang::Severity::kError;
  d.message = doc.value("message", "");
  d.span.line = doc.value("line", 1);
  d.span.column = doc.value("column", 1);
  d.span.length = doc.value("length", 0);
  if (doc.contains("suggestion") && doc["suggestion"].is_string()) {
    d.suggestion = doc["suggestion"].get<std::string>();
  }
  return d;
}

json ToJson(const solver::SolveResult& r) {
  json assignment = json::object();
  for (const auto& [name, value] : r.assignment) assignment[name] = value;
  return {{"status", solver::SolveStatusName(r.status)},
          {"assignment", assignment},
          {"objective_value", r.objective_value.has_value()
                                  ? json(*r.objective_value)
                                  : json()},
          {"relaxations", r.relaxations},
          {"stats",
           {{"simplex_iterations", r.stats.simplex_iterations},
            {"nodes", r.stats.nodes}}}};
}

solver::SolveResult SolveResultFromJson(const json& doc) {
  solver::SolveResult r;
  const std::string status = doc.value("status", "");
  for (solver::SolveStatus s :
       {solver::SolveStatus::kOptimal, solver::SolveStatus::kInfeasible,
        solver::SolveStatus::kUnbounded,
        solver::SolveStatus::kIterationLimit}) {
    if (status == solver::SolveStatusName(s)) r.status = s;
  }
  const json assignment = doc.value("assignment", json::object());
  for (const auto& [name, value] : assignment.items()) {
    r.assignment[name] = value.get<double>();
  }
  if (doc.contains("objective_value") && doc["objective_value"].is_number()) {
    r.objective_value = doc["objective_value"].get<double>();
  }
  for (const json& note : doc.value("relaxations", json::array())) {
    r.relaxations.push_back(note.get<std::string>());
  }
  const json stats = doc.value("stats", json::object());
  r.stats.simplex_iterations = stats.value("simplex_iterations", std::int64_t{0});
  r.stats.nodes = stats.value("nodes", std::int64_t{0});
  return r;
}

json ToJson(const Session& s) {
  json out = CommonJson(s);
  out["artifacts"] = ArtifactsJson(s, true, true);
  return out;
}

json SnapshotView(const Session& s) {
  json out = CommonJson(s);
  out["visible"] = ArtifactsJson(s, s.visibility.show_formulas,
                                 s.visibility.show_code);
  return out;
}

absl::Status Apply(Session& session, const json& event) {
  if (!event.is_object() || !event.contains("type") ||
      !event["type"].is_string() || !event.contains("seq") ||
      !event["seq"].is_number_integer()) {
    return Rejected("event lacks type or seq");
  }
  const std::int64_t seq = event["seq"].get<std::int64_t>();
  if (seq != session.last_seq + 1) {
    return Rejected(absl::StrCat("event seq ", seq, " does not follow ",
                                 session.last_seq));
  }
  const std::string type = event["type"].get<std::string>();
  if ((seq == 1) != (type == "created")) {
    return Rejected("the log must start with exactly one 'created' event");
  }
  Session next = session;
  MW_RETURN_IF_ERROR(ApplyEvent(next, type, event));
  next.last_seq = seq;
  session = std::move(next);
  return absl::OkStatus();
}

absl::StatusOr<Session> Replay(const std::vector<std::string>& lines) {
  Session session;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    json event = json::parse(lines[i], nullptr, false);
    if (event.is_discarded()) {
      return MakeError(ErrorKind::kStorageFailure,
                       absl::StrCat("event log line ", i + 1,
                                    " is not valid JSON"));
    }
    absl::Status status = Apply(session, event);
    if (!status.ok()) {
      return MakeError(ErrorKind::kStorageFailure,
                       absl::StrCat("event log line ", i + 1, ": ",
                                    status.message()));
    }
  }
  if (session.last_seq == 0) {
    return MakeError(ErrorKind::kStorageFailure, "the event log is empty");
  }
  return session;
}

absl::Status SessionRecorder::Emit(const std::string& type, json payload) {
  if (!payload.is_object()) payload = json::object();
  payload["type"] = type;
  payload["seq"] = session_.last_seq + 1;
  const std::string line =
      payload.dump(-1, ' ', false, json::error_handler_t::replace);
  Session next = session_;
  MW_RETURN_IF_ERROR(Apply(next, json::parse(line)));
  if (sink_) MW_RETURN_IF_ERROR(sink_(line));
  session_ = std::move(next);
  return absl::OkStatus();
}

}  // namespace modelwright::pipeline
