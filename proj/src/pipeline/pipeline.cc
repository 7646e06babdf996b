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

#include "modelwright/pipeline/pipeline.h"

#include <variant>

#include "absl/strings/str_cat.h"
#include "modelwright/common/status.h"
#include "modelwright/common/strings.h"
#include "modelwright/ir/json_io.h"
#include "modelwright/ir/validate.h"
#include "modelwright/lang/miniapl.h"

namespace modelwright::pipeline {
namespace {

using nlohmann::json;

constexpr char kGuidance[] =
    "I can help with optimization questions: deciding quantities to make, "
    "buy, ship or assign so that a goal such as profit or cost is as good as "
    "possible under limits. Please describe what you want to decide, what to "
    "maximize or minimize, and the limits that apply.";

absl::Status SetStatus(SessionRecorder& r, SessionStatus status) {
  return r.Emit("status", {{"status", SessionStatusName(status)}});
}

bool UsesFiles(const ProblemIR& p) {
  for (const DataBinding& b : p.bindings) {
    if (std::holds_alternative<FileReference>(b.source)) return true;
  }
  return false;
}

json DiagnosticsJson(const std::vector<lang::Diagnostic>& diagnostics) {
  json out = json::array();
  for (const lang::Diagnostic& d : diagnostics) out.push_back(ToJson(d));
  return out;
}

lang::Diagnostic PlainDiagnostic(const std::string& message) {
  lang::Diagnostic d;
  d.message = message;
  return d;
}

}  // namespace

ProblemIR ReattachBindings(ProblemIR code_problem,
                           const ProblemIR& formulation) {
  for (DataBinding& b : code_problem.bindings) {
    if (!std::holds_alternative<UnresolvedSource>(b.source)) continue;
    if (const DataBinding* original = formulation.FindBinding(b.parameter)) {
      b.source = original->source;
    }
  }
  return code_problem;
}

absl::StatusOr<std::string> Pipeline::PostMessage(SessionRecorder& recorder,
                                                  const std::string& text,
                                                  const FileContents& files,
                                                  llm::Transcript* transcript) {
  if (Trim(text).empty()) {
    return MakeError(ErrorKind::kPrecondition, "the message is empty");
  }
  MW_RETURN_IF_ERROR(recorder.Emit("user_message", {{"text", text}}));
  std::string reply;
  const std::string& description = recorder.session().artifacts.description;
  if (description.empty()) {
    absl::StatusOr<bool> relevant = CheckRelevance(text, backend_, transcript);
    if (!relevant.ok()) {
      MW_RETURN_IF_ERROR(recorder.Emit(
          "error", {{"message", std::string(relevant.status().message())}}));
      reply = absl::StrCat("I could not process the message right now (",
                           relevant.status().message(),
                           "). Please try again.");
    } else if (!*relevant) {
      reply = kGuidance;
    }
    if (!relevant.ok() || !*relevant) {
      MW_RETURN_IF_ERROR(SetStatus(recorder, SessionStatus::kGathering));
      MW_RETURN_IF_ERROR(
          recorder.Emit("reply", {{"text", reply}, {"turn", true}}));
      return reply;
    }
    MW_RETURN_IF_ERROR(recorder.Emit("description", {{"text", text}}));
  } else {
    MW_RETURN_IF_ERROR(recorder.Emit(
        "description", {{"text", absl::StrCat(description, "\n", text)}}));
  }
  MW_ASSIGN_OR_RETURN(reply, FromCompleteness(recorder, files, transcript));
  MW_RETURN_IF_ERROR(recorder.Emit("reply", {{"text", reply}, {"turn", true}}));
  return reply;
}

absl::StatusOr<std::string> Pipeline::EditArtifact(SessionRecorder& recorder,
                                                   Stage stage,
                                                   const std::string& content,
                                                   const FileContents& files,
                                                   llm::Transcript* transcript) {
  const Session& s = recorder.session();
  std::string reply;
  switch (stage) {
    case Stage::kDescription: {
      MW_RETURN_IF_ERROR(recorder.Emit("description", {{"text", content}}));
      if (Trim(content).empty()) {
        MW_RETURN_IF_ERROR(SetStatus(recorder, SessionStatus::kGathering));
        reply = "The description is empty. Please describe the problem.";
      } else {
        MW_ASSIGN_OR_RETURN(reply,
                            FromCompleteness(recorder, files, transcript));
      }
      break;
    }
    case Stage::kFormulation: {
      if (!s.artifacts.formulation.has_value()) {
        return MakeError(ErrorKind::kPrecondition,
                         "there is no formulation to edit yet");
      }
      std::vector<lang::Diagnostic> findings;
      absl::StatusOr<ProblemIR> problem = ParseProblemJson(content);
      if (!problem.ok()) {
        findings.push_back(PlainDiagnostic(std::string(problem.status().message())));
      } else {
        for (const Violation& v : Validate(*problem)) {
          findings.push_back(PlainDiagnostic(v.message));
        }
        if (findings.empty()) {
          absl::StatusOr<CodeCheck> code = GenerateAndCheckCode(*problem);
          if (!code.ok()) {
            findings.push_back(
                PlainDiagnostic(std::string(code.status().message())));
          }
        }
      }
      if (!findings.empty()) {
        MW_RETURN_IF_ERROR(recorder.Emit(
            "edit_rejected", {{"stage", "formulation"},
                              {"diagnostics", DiagnosticsJson(findings)}}));
        MW_RETURN_IF_ERROR(SetStatus(recorder, SessionStatus::kFailed));
        reply = absl::StrCat("The edited formulation was rejected:\n",
                             lang::FormatDiagnostics(findings));
        MW_RETURN_IF_ERROR(recorder.Emit("reply", {{"text", reply}}));
        return MakeError(ErrorKind::kInvalidIR, reply);
      }
      Requirements requirements = MergeRequirements(
          s.requirements, RequirementsFromJson(
                              json::parse(content, nullptr, false)
                                  .value("requirements", json())));
      MW_ASSIGN_OR_RETURN(reply, FromFormulation(recorder, *problem,
                                                 requirements, files,
                                                 transcript));
      break;
    }
    case Stage::kCode: {
      if (!s.artifacts.code.has_value()) {
        return MakeError(ErrorKind::kPrecondition,
                         "there is no code to edit yet");
      }
      lang::SourceFile code{content, lang::SourceOrigin::kUserEdited};
      MW_ASSIGN_OR_RETURN(reply, FromCode(recorder, code, files, transcript));
      if (!recorder.session().diagnostics.empty()) {
        MW_RETURN_IF_ERROR(recorder.Emit("reply", {{"text", reply}}));
        return MakeError(ErrorKind::kInvalidIR, reply);
      }
      break;
    }
  }
  MW_RETURN_IF_ERROR(recorder.Emit("reply", {{"text", reply}}));
  return reply;
}

absl::StatusOr<std::string> Pipeline::Solve(SessionRecorder& recorder,
                                            const FileContents& files,
                                            llm::Transcript* transcript) {
  const Session& s = recorder.session();
  if (!s.artifacts.code.has_value()) {
    return MakeError(ErrorKind::kPrecondition, "no code has been staged");
  }
  if (!s.diagnostics.empty()) {
    return MakeError(ErrorKind::kPrecondition,
                     "the staged code has grammar errors");
  }
  MW_ASSIGN_OR_RETURN(std::string reply, RunSolve(recorder, files, transcript));
  MW_RETURN_IF_ERROR(recorder.Emit("reply", {{"text", reply}}));
  return reply;
}

absl::StatusOr<std::string> Pipeline::FromCompleteness(
    SessionRecorder& recorder, const FileContents& files,
    llm::Transcript* transcript) {
  absl::StatusOr<CompletenessReport> report = CheckCompleteness(
      recorder.session().artifacts.description, backend_, transcript);
  if (!report.ok()) {
    MW_RETURN_IF_ERROR(recorder.Emit(
        "error", {{"message", std::string(report.status().message())}}));
    MW_RETURN_IF_ERROR(SetStatus(recorder, SessionStatus::kGathering));
    return absl::StrCat("I could not check the description right now (",
                        report.status().message(), "). Please try again.");
  }
  MW_RETURN_IF_ERROR(
      recorder.Emit("completeness", {{"report", ToJson(*report)}}));
  if (!report->complete) {
    MW_RETURN_IF_ERROR(SetStatus(recorder, SessionStatus::kGathering));
    return report->follow_up_question;
  }
  return FromFormulate(recorder, files, transcript);
}

absl::StatusOr<std::string> Pipeline::FromFormulate(
    SessionRecorder& recorder, const FileContents& files,
    llm::Transcript* transcript) {
  FormulationOutcome outcome =
      FormulateWithRetry(recorder.session().artifacts.description, backend_,
                         options_.max_retries, transcript);
  if (!outcome.formulation.has_value()) {
    json attempts = json::array();
    for (const Attempt& a : outcome.attempts) attempts.push_back(ToJson(a));
    MW_RETURN_IF_ERROR(
        recorder.Emit("formulation_failed", {{"attempts", attempts}}));
    MW_RETURN_IF_ERROR(recorder.Emit(
        "error", {{"message", std::string(outcome.status.message())}}));
    MW_RETURN_IF_ERROR(SetStatus(recorder, SessionStatus::kFailed));
    return absl::StrCat("I could not build a formulation: ",
                        outcome.status.message(),
                        ". You can rephrase the problem or edit the "
                        "description.");
  }
  return FromFormulation(recorder, outcome.formulation->problem,
                         outcome.formulation->requirements, files, transcript);
}

absl::StatusOr<std::string> Pipeline::FromFormulation(
    SessionRecorder& recorder, const ProblemIR& problem,
    const Requirements& requirements, const FileContents& files,
    llm::Transcript* transcript) {
  MW_RETURN_IF_ERROR(recorder.Emit(
      "formulation",
      {{"ir", ToJson(problem)}, {"requirements", ToJson(requirements)}}));
  absl::StatusOr<CodeCheck> code =
      GenerateAndCheckCode(*recorder.session().artifacts.formulation);
  if (!code.ok()) {
    MW_RETURN_IF_ERROR(recorder.Emit(
        "error", {{"message", std::string(code.status().message())}}));
    MW_RETURN_IF_ERROR(SetStatus(recorder, SessionStatus::kFailed));
    return absl::StrCat("The formulation could not be turned into code: ",
                        code.status().message());
  }
  return FromCode(recorder, code->code, files, transcript);
}

absl::StatusOr<std::string> Pipeline::FromCode(SessionRecorder& recorder,
                                               const lang::SourceFile& code,
                                               const FileContents& files,
                                               llm::Transcript* transcript) {
  const std::vector<lang::Diagnostic> diagnostics = lang::GrammarCheck(code);
  MW_RETURN_IF_ERROR(recorder.Emit(
      "code", {{"text", code.text},
               {"origin", lang::SourceOriginName(code.origin)},
               {"diagnostics", DiagnosticsJson(diagnostics)}}));
  if (!diagnostics.empty()) {
    MW_RETURN_IF_ERROR(SetStatus(recorder, SessionStatus::kFailed));
    return absl::StrCat("The code has ", diagnostics.size(),
                        " error(s) and cannot be solved yet:\n",
                        lang::FormatDiagnostics(diagnostics));
  }
  return RunSolve(recorder, files, transcript);
}

absl::StatusOr<std::string> Pipeline::RunSolve(SessionRecorder& recorder,
                                               const FileContents& files,
                                               llm::Transcript* transcript) {
  const Session& s = recorder.session();
  lang::ParseResult parsed = lang::Parse(*s.artifacts.code);
  if (auto* diagnostics = std::get_if<std::vector<lang::Diagnostic>>(&parsed)) {
    MW_RETURN_IF_ERROR(SetStatus(recorder, SessionStatus::kFailed));
    return absl::StrCat("The code cannot be solved:\n",
                        lang::FormatDiagnostics(*diagnostics));
  }
  const ProblemIR model =
      ReattachBindings(std::get<ProblemIR>(std::move(parsed)),
                       *s.artifacts.formulation);
  absl::StatusOr<ProblemIR> bound = BindData(model, files);
  if (!bound.ok()) {
    const bool missing_file = KindOf(bound.status()) == ErrorKind::kMissingFile;
    MW_RETURN_IF_ERROR(recorder.Emit(
        "error", {{"message", std::string(bound.status().message())}}));
    MW_RETURN_IF_ERROR(SetStatus(
        recorder, missing_file ? SessionStatus::kReady : SessionStatus::kFailed));
    if (missing_file) {
      return absl::StrCat("The model is ready, but ", bound.status().message(),
                          ". Please upload it and solve again.");
    }
    return absl::StrCat("The data could not be bound: ",
                        bound.status().message());
  }
  absl::StatusOr<solver::SolveResult> result =
      solver::Solve(*bound, options_.solver);
  if (!result.ok()) {
    MW_RETURN_IF_ERROR(recorder.Emit(
        "error", {{"message", std::string(result.status().message())}}));
    MW_RETURN_IF_ERROR(SetStatus(recorder, SessionStatus::kFailed));
    return absl::StrCat("The solver rejected the model: ",
                        result.status().message());
  }
  MW_RETURN_IF_ERROR(recorder.Emit("solve", {{"result", ToJson(*result)}}));
  const std::vector<SensefulViolation> violations =
      SensefulCheck(*bound, *result, recorder.session().requirements);
  json violations_json = json::array();
  for (const SensefulViolation& v : violations) {
    violations_json.push_back(ToJson(v));
  }
  MW_RETURN_IF_ERROR(
      recorder.Emit("senseful", {{"violations", violations_json}}));
  std::string text = Interpret(*bound, *result, options_.interpret_mode,
                               &backend_, transcript, UsesFiles(model));
  MW_RETURN_IF_ERROR(recorder.Emit("interpretation", {{"text", text}}));
  MW_RETURN_IF_ERROR(SetStatus(recorder, SessionStatus::kSolved));
  for (const SensefulViolation& v : violations) {
    absl::StrAppend(&text, "\n", v.question);
  }
  return text;
}

}  // namespace modelwright::pipeline
